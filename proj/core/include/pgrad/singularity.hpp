#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgrad/numerics.hpp"
#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"

namespace pgrad {

enum class SingularityVerdict {
  RemovableOrRegular,  ///< bounded near the puncture (or flux indistinguishable from 0)
  WeakSingular,        ///< u ~ k_hat * flux_prefactor * mu_p
  StrongSingular,      ///< |u| ~ lambda_hat r^{-beta_q}
  CriticalLogProfile,  ///< q = q_c log-corrected shape (negative data)
  Unclassified,
};

struct SingularityClassification {
  SingularityVerdict verdict = SingularityVerdict::Unclassified;
  std::optional<double> k_hat;       ///< flux estimate (WeakSingular), sign matches the data
  std::optional<double> lambda_hat;  ///< singular constant estimate (StrongSingular)
  double fitted_exponent = 0.0;      ///< slope of the |u| power-law fit on the window
  std::vector<std::pair<std::string, FitResult>> diagnostics;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

const char* to_string(SingularityVerdict verdict);

/// Limit of u / (flux_prefactor * mu_p) with a least-squares acceleration whose
/// correction exponents come from the first integral.  error is the spread
/// between the shallow- and deep-half estimates.
struct FluxEstimate {
  double value = 0.0;       ///< flux in the normalization with K = k^{p-1-q}
  double error = 0.0;
  double ratio_abs0 = 0.0;  ///< same limit against the plain mu_p of (abs-0)
  double shallow = 0.0;     ///< estimate from the shallow half-window
  double deep = 0.0;        ///< estimate from the deep half-window
};

/// Richardson-style flux of a sampled profile over its deepest usable window
/// (r <= 1e-2).  Throws Divergent when the two half-window estimates disagree
/// beyond 25%, i.e. the ratio has no finite limit.
FluxEstimate estimate_flux(const RadialProfile& profile, const ProblemParams& params);

/// Classifies the isolated-singularity behavior of a sampled radial solution
/// on the window (r_lo, r_hi], r_hi <= 1e-2, >= 32 samples.
///
/// Decision order: flux fit (Cauchy across half-windows and explaining the
/// deepest sample) -> WeakSingular; power-law fit with slope -beta_q and
/// constant matching lambda/lambda~ -> StrongSingular; q = q_c negative data
/// with the log-corrected shape -> CriticalLogProfile; bounded -> Removable;
/// else Unclassified.  Both weak and strong passing raises ConflictingFits.
///
/// bound_for_regular defaults to 10x the observed |u| at the shallow window
/// edge.  tol controls the Cauchy and constant-match thresholds.
SingularityClassification classify(const RadialProfile& profile, const ProblemParams& params,
                                   double window_lo, double window_hi, double tol = 0.05,
                                   std::optional<double> bound_for_regular = {});

/// Residual of the constant omega in the equation satisfied on the unit sphere
/// by separable singular profiles:
///   -(beta^2 w^2)^{q/2} - beta (beta (p-1) + p - n) (beta^2 w^2)^{(p-2)/2} w.
double constant_sphere_residual(const ProblemParams& params, double omega);

/// constant_sphere_residual evaluated at omega = lambda~; vanishes
/// identically.  Requires q_c < q < p, 1 < p <= n.
double verify_constant_sphere_solution(const ProblemParams& params);

}  // namespace pgrad
