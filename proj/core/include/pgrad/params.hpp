#pragma once

#include <string>

#include "pgrad/errors.hpp"

namespace pgrad {

/// Problem data for  -div(|Du|^{p-2} Du) + |Du|^q = 0  on a domain of R^n.
/// Only q + 1 - p > 0 is required at construction; operations from the
/// singularity-classification theory additionally assume p <= n and state
/// so individually.
struct ProblemParams {
  int n;     ///< spatial dimension, >= 2
  double p;  ///< p-Laplacian exponent, > 1
  double q;  ///< gradient absorption exponent, > p - 1

  ProblemParams(int n_, double p_, double q_);
};

/// Position of q relative to the critical exponents q_c = n(p-1)/(n-1),
/// q_tilde = p - 1 + p/n and p itself.
enum class RegimeTag {
  SubcriticalAbsorption,  ///< p-1 < q < q_c
  Critical,               ///< q = q_c (within tolerance)
  SupercriticalBelowP,    ///< q_c < q < p
  QEqualsP,               ///< q = p (within tolerance)
  QAboveP,                ///< q > p
};

struct Regime {
  RegimeTag tag;
  double q_c;
  double q_tilde;
  bool at_critical;  ///< |q - q_c| within tolerance (may hold alongside QEqualsP when p = n)
  bool above_tilde;  ///< q >= q_tilde
};

/// Absolute tolerance for detecting q sitting exactly on a critical value.
/// Floating-point criticality is measure zero; callers wanting exact
/// criticality pass parameters that hit it in binary (e.g. q = 3/2, n = 3, p = 2).
inline constexpr double kCriticalTol = 1e-12;

/// q_c = n(p-1)/(n-1), the removability threshold for isolated singularities.
double critical_exponent_qc(const ProblemParams& params);

/// beta_q = (p-q)/(q+1-p); negative for q > p, zero at q = p.
double beta_q(const ProblemParams& params);

/// b = (n(p-1) - (n-1)q)/(q+1-p).  Positive iff q < q_c, zero iff q = q_c.
/// Identity: b = beta_q (p-1) + p - n.
double coefficient_b(const ProblemParams& params);

/// Constant of the explicit positive singular solution U = lambda r^{-beta_q}:
/// lambda = beta_q^{-1} (beta_q (p-1) + p - n)^{1/(q+1-p)}.
/// Requires 1 < p <= n and p-1 < q < q_c, else throws RegimeError.
double lambda_singular(const ProblemParams& params);

/// Constant of the explicit negative singular solution V = -lambda~ r^{-beta_q}:
/// lambda~ = beta_q^{-1} (n - p - beta_q (p-1))^{1/(q+1-p)}.
/// Requires 1 < p <= n and q_c < q < p, else throws RegimeError.
double lambda_tilde(const ProblemParams& params);

/// q~ = p - 1 + p/n, the second critical value for signed solutions.
double q_tilde(const ProblemParams& params);

/// q* = q/(q+1-p), the conjugate exponent of q/(p-1).
double q_star(const ProblemParams& params);

/// Prefactor linking the plain fundamental solution mu_p (see mu_p in
/// radial_families.hpp) to the flux normalization in which the first-integral
/// constant of the regular families is exactly K = k^{p-1-q}:
///   u ~ k * flux_prefactor * mu_p  near the puncture.
/// Equals (p-1)/(n-p) for p < n and 1 for p = n.
double mu_p_flux_prefactor(const ProblemParams& params);

/// Classifies q against q_c, q_tilde and p.  Ties go to QEqualsP when both
/// q = p and q = q_c hold (possible only at p = n), with at_critical set.
Regime classify_regime(const ProblemParams& params);

const char* to_string(RegimeTag tag);

}  // namespace pgrad
