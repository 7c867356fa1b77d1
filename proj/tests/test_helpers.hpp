#pragma once

#include <cmath>
#include <functional>

#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"

namespace pgrad::testing {

/// |u'|^{p-2} u'
inline double p_flux(double du, double p) {
  if (du == 0.0) return 0.0;
  return std::pow(std::fabs(du), p - 2.0) * du;
}

/// Defect of (|u'|^{p-2}u')' + (n-1)/r |u'|^{p-2}u' - |u'|^q at r, normalized
/// by the largest term magnitude (the raw defect spans ~16 orders across a
/// log grid, so only the scaled version is meaningful in doubles).
/// The flux derivative uses a 4th-order central stencil with h = 1e-3 r.
inline double scaled_radial_residual(const ProblemParams& params,
                                     const std::function<double(double)>& du, double r) {
  const double h = 1e-3 * r;
  auto phi = [&](double s) { return p_flux(du(s), params.p); };
  const double dphi =
      (-phi(r + 2 * h) + 8.0 * phi(r + h) - 8.0 * phi(r - h) + phi(r - 2 * h)) / (12.0 * h);
  const double t2 = (params.n - 1.0) / r * phi(r);
  const double t3 = -std::pow(std::fabs(du(r)), params.q);
  const double defect = dphi + t2 + t3;
  const double scale = std::max({std::fabs(dphi), std::fabs(t2), std::fabs(t3), 1e-300});
  return defect / scale;
}

/// Closed form of the maximal singular solution: lambda (r^{-beta_q} - 1).
inline double u_infinity(const ProblemParams& params, double r) {
  return lambda_singular(params) * (std::pow(r, -beta_q(params)) - 1.0);
}

}  // namespace pgrad::testing
