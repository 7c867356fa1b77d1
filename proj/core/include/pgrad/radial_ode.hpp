#pragma once

#include <span>

#include "pgrad/numerics.hpp"
#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"

namespace pgrad {

/// State of the flux substitution w(r) = r^{n-1} |u'|^{p-2} u'.
/// Invariant: w and u' share a sign, |u'| = (|w| r^{1-n})^{1/(p-1)}.
struct WState {
  double r;
  double w;

  double u_prime(const ProblemParams& params) const;
};

/// Solves the first integral  -|w|^{-q/(p-1)} w = G(r; K)  for w (both the
/// power-law and the q = q_c log branch of G).  Throws DomainError on the
/// blow-up locus G = 0.
WState first_integral(const ProblemParams& params, double r, double K);

enum class StopReason { Completed, Blowup, DegenerateGradient, Underflow };

struct DirectResult {
  RadialProfile profile;
  StopReason reason = StopReason::Completed;
  double last_r = 0.0;
};

/// Direct adaptive integration of the radial equation as the first-order
/// system (u, w) in the variable t = ln r:
///   du/dt = sign(w) |w|^{1/(p-1)} e^{t (p-n)/(p-1)}
///   dw/dt = |w|^{q/(p-1)}  e^{t (n(p-1)-(n-1)q)/(p-1)}
/// Blow-up (|u| past 1e12, the signature of a moving singularity) and
/// gradient degeneracy (|u'| < 1e-14) end the trajectory early; the partial
/// profile and stop reason are returned.
DirectResult integrate_direct_partial(const ProblemParams& params, double r0, double u0,
                                      double du0, double r1, const OdeSpec& spec = {},
                                      std::span<const double> r_nodes = {});

/// As integrate_direct_partial, but failing to reach r1 is an error:
/// throws StepUnderflow near blow-up and DegenerateGradient when the solution
/// has become constant, both carrying the last valid radius.
RadialProfile integrate_direct(const ProblemParams& params, double r0, double u0, double du0,
                               double r1, const OdeSpec& spec = {},
                               std::span<const double> r_nodes = {});

/// Threshold below which |u'| is declared degenerate (solution constant).
inline constexpr double kDegenerateGradient = 1e-14;
/// Blow-up magnitude for |u| along direct trajectories.
inline constexpr double kBlowupMagnitude = 1e12;

/// Recovers the first-integral constant K of the flux-k family numerically:
/// scans and root-finds K so that the quadrature solution of the unit-ball
/// problem satisfies lim_{r->0} u(r) / (flux_prefactor * mu_p(r)) = k.
/// Agrees with the closed form K = k^{p-1-q} within tol (relative).
double shoot_for_flux(const ProblemParams& params, double k, double tol);

}  // namespace pgrad
