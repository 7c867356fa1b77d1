#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pgrad/numerics.hpp"
#include "pgrad/params.hpp"

namespace pgrad {

/// Closed-form and quadrature-defined radial solutions of
///   (|u'|^{p-2} u')' + (n-1)/r |u'|^{p-2} u' - |u'|^q = 0.
enum class FamilyKind {
  FundamentalMuP,           ///< p-harmonic fundamental solution (no absorption term)
  SingularPositiveU,        ///< lambda r^{-beta_q}, p-1 < q < q_c
  SingularNegativeV,        ///< -lambda~ r^{-beta_q}, q_c < q < p
  RegularFluxK,             ///< flux-k solution on the unit ball, K = k^{p-1-q}
  StrongSingular,           ///< K = 0 maximal solution, lambda (r^{-beta_q} - 1)
  GlobalKM,                 ///< entire-space solution decaying to M, parameters k > 0, M >= 0
  BlowupEps,                ///< K < 0 solution on (eps, 1] blowing up at r = eps
  CriticalNegativeProfile,  ///< q = q_c negative family (log-corrected asymptotics)
};

struct FamilyDescriptor {
  FamilyKind kind;
  ProblemParams params;
  std::optional<double> k;    ///< flux (RegularFluxK, GlobalKM) or raw first-integral K (CriticalNegativeProfile)
  std::optional<double> M;    ///< limit at infinity (GlobalKM)
  std::optional<double> eps;  ///< blow-up radius (BlowupEps)

  /// Lower/upper ends of the natural domain (open at blow-up loci).
  double natural_r_min() const;
  double natural_r_max() const;
};

FamilyDescriptor make_fundamental(const ProblemParams& params);
FamilyDescriptor make_singular_positive(const ProblemParams& params);
FamilyDescriptor make_singular_negative(const ProblemParams& params);
FamilyDescriptor make_regular_flux(const ProblemParams& params, double k);
FamilyDescriptor make_strong_singular(const ProblemParams& params);
FamilyDescriptor make_global(const ProblemParams& params, double k, double M);
FamilyDescriptor make_blowup(const ProblemParams& params, double eps);
FamilyDescriptor make_critical_negative(const ProblemParams& params, double K = 0.0);

const char* to_string(FamilyKind kind);

/// Sampled radial function with analytic derivative values.
struct RadialProfile {
  std::vector<double> r;   ///< strictly increasing, positive
  std::vector<double> u;
  std::vector<double> du;
  std::optional<FamilyDescriptor> family;
  double r_min = 0.0;  ///< domain the samples are drawn from
  double r_max = 0.0;

  /// Cubic Hermite interpolation using the stored derivative values.
  double value(double at) const;
  /// Piecewise interpolation of u'.
  double derivative(double at) const;
};

/// Fundamental solution of the p-Laplacian: r^{(p-n)/(p-1)} for p < n,
/// -ln r for p = n.  Requires 1 < p <= n.
double mu_p(const ProblemParams& params, double r);
double mu_p_prime(const ProblemParams& params, double r);

/// Which sign branch of the first integral a family lives on.
/// Positive-family solutions decrease (u' < 0, bracket > 0); negative-family
/// solutions are the sign-flipped ones (u' > 0, bracket < 0).
enum class FamilySign { Positive, Negative };

/// First-integral bracket
///   G(r; K) = b^{-1} r^{(q+1-p) b/(p-1)} + K            (q != q_c)
///   G(r; K) = (n-1)^{-1} ln r + K                       (q  = q_c)
/// in terms of which  -|w|^{-q/(p-1)} w = G  for w = r^{n-1}|u'|^{p-2}u'.
double first_integral_bracket(const ProblemParams& params, double r, double K);

/// Exact radial derivative from the first integral:
///   u'(r) = -sign(G) r^{(1-n)/(p-1)} |G|^{-1/(q+1-p)}.
/// Throws DomainError when the bracket sign does not match the requested
/// family branch (the point lies on or past the blow-up locus).
double u_prime_exact(const ProblemParams& params, double r, double K, FamilySign sign);

/// First-integral constant of a quadrature family
/// (RegularFluxK and GlobalKM: K = k^{p-1-q}; StrongSingular: K = 0;
/// BlowupEps: K = -eps^{(q+1-p)b/(p-1)}/b).
double family_first_integral_K(const FamilyDescriptor& desc);

/// Evaluates a family on the given strictly increasing grid.  u is obtained by
/// cumulative quadrature of the exact derivative, anchored at u(1) = 0 for
/// ball families and u(inf) = M for global ones; du is filled analytically.
RadialProfile evaluate_family(const FamilyDescriptor& desc, std::span<const double> r_grid,
                              const QuadratureSpec& quad = {});

/// Correction terms of the ratio u / (flux_prefactor * mu_p) of the flux
/// families as r -> 0, for least-squares acceleration of the flux limit:
/// powers r^{min(j eta, s0)} (eta = (q+1-p) b/(p-1), s0 = (n-p)/(p-1)) with
/// the exact r^{s0} ln(1/r) term when j eta collides with s0; for p = n,
/// powers of 1/ln(1/r).
std::vector<std::function<double(double)>> flux_ratio_basis(const ProblemParams& params);

/// Leading-order behavior of the family near r = 0 (r <= r_small, default 1e-2):
///   flux families    k * (p-1)/(n-p) r^{(p-n)/(p-1)}   (-k ln r at p = n)
///   strong singular  lambda r^{-beta_q}
///   negative singular -lambda~ r^{-beta_q}
///   critical          -r^{(p-n)/(p-1)} (-ln r)^{-(n-1)/(p-1)} up to a free constant
double asymptotic_profile(const FamilyDescriptor& desc, double r, double r_small = 1e-2);

}  // namespace pgrad
