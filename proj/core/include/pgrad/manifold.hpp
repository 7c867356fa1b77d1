#pragma once

#include <span>
#include <vector>

#include "pgrad/bounds.hpp"
#include "pgrad/numerics.hpp"
#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"

namespace pgrad {

/// Curvature scales of the comparison geometry: Ricci >= -(n-1) B^2 and,
/// when p > 2, sectional >= -Btilde^2.  B = 0 reduces everything Euclidean.
struct CurvatureBounds {
  double B = 0.0;
  double Btilde = 0.0;
  double p = 2.0;

  double B_p() const { return B + (p > 2.0 ? (p - 2.0) * Btilde : 0.0); }
};

/// Constant-curvature model space (hyperbolic space of curvature -B^2 for
/// B > 0, Euclidean for B = 0); geodesic spheres scale with S(r).
/// On it the comparison bounds Delta_g r <= (n-1) S'/S and D^2 r <= (S'/S) g
/// hold with equality, making it the extremal test geometry.  Nonpositive
/// curvature makes every geodesic ball convex, so the convexity-radius
/// hypothesis needed for 1 < p < 2 holds automatically and is recorded as
/// satisfied rather than computed.
struct ModelSpace {
  int n = 3;
  double B = 0.0;

  double S(double r) const;
  double S_prime(double r) const;
  /// ln S(r), stable for radii where sinh overflows.
  double log_S(double r) const;
};

/// mu threshold of the curvature barrier: ((n-1) B^2)^{1/(q+1-p)}.
double manifold_mu_threshold(const ProblemParams& params, double B);

/// lambda shape of the curvature barrier without its scale:
/// max{(R^4 B^2)^{1/(q+1-p)}, ((1 + B_p R) R^2)^{1/(q+1-p)}}.
double manifold_lambda_form(const ProblemParams& params, const CurvatureBounds& curv, double R);

/// Residual of L*(w) = A(w) + C w^{q+2-p} - D |grad w|^2/w - (n-1) B^2 w for
/// w = lambda (R^2 - r^2)^{-2/(q+1-p)} + mu, using the comparison bounds
/// Delta_g r <= (n-1)(1 + B r)/r and tangential D^2 r <= (1 + Btilde r)/r in
/// the adversarial-direction sense.  B = Btilde = 0, mu = 0 coincides bit for
/// bit with the Euclidean evaluation.
SupersolutionReport bernstein_residual_manifold(const ProblemParams& params,
                                                const CurvatureBounds& curv, double R,
                                                double lambda, double mu,
                                                const BernsteinConstants& consts,
                                                std::span<const double> r_grid);

/// Least scale c (bisection, 1e-6 relative) such that
/// lambda = c * manifold_lambda_form and mu = manifold_mu_threshold make the
/// barrier a supersolution on the default grid.
double calibrate_manifold_scale(const ProblemParams& params, const CurvatureBounds& curv,
                                double R, const BernsteinConstants& consts);

/// Pure scaling form of the curvature gradient bound (on |grad u|^2):
/// c * max{B^{2/(q+1-p)}, (1 + B_p d)^{1/(q+1-p)} d^{-2/(q+1-p)}}.
double gradient_bound_formula(const ProblemParams& params, const CurvatureBounds& curv, double d,
                              double c);

struct ManifoldGradientBound {
  double bound = 0.0;        ///< w at the ball center: lambda d^{-4/(q+1-p)} + mu
  double c_effective = 0.0;  ///< bound divided by the max{...} scaling form
  double lambda = 0.0;
  double mu = 0.0;
};

/// Calibrated curvature-dependent bound on |grad u|^2 at distance d from the
/// boundary.
ManifoldGradientBound gradient_bound_manifold(const ProblemParams& params,
                                              const CurvatureBounds& curv, double d,
                                              const BernsteinConstants& consts);

/// Radial solution on the model space via the flux substitution
/// w = S^{n-1} |u'|^{p-2} u', whose first integral is
///   -|w|^{-q/(p-1)} w = G(r),  G' = (q+1-p)/(p-1) S^{-(n-1)(q+1-p)/(p-1)}.
/// The bracket is anchored at r = 0 for q < q_c (so the B = 0 case reproduces
/// the Euclidean bracket b^{-1} r^{...} + K exactly) and at r = 1 otherwise;
/// for B > 0 it is evaluated through the convergent tail integral, which
/// keeps the sign stable arbitrarily far out (separatrix included).  u comes
/// from segment quadrature of the exact derivative, normalized to 0 at the
/// first grid node; du is exact from G.
RadialProfile solve_radial_hyperbolic(const ProblemParams& params, const ModelSpace& model,
                                      double K, std::span<const double> r_grid,
                                      const QuadratureSpec& quad = {});

/// K of the separatrix solution (G -> 0 at infinity), the global profile with
/// |u'| -> ((n-1) B)^{1/(q+1-p)}: the linear-growth solution saturating the
/// curvature bound.  Requires q < q_c.
double hyperbolic_separatrix_K(const ProblemParams& params, const ModelSpace& model);

struct LogGradientReport {
  std::vector<double> r;
  std::vector<double> log_gradient;       ///< |(ln v)'| at r
  double sup_log_gradient = 0.0;
  double kappa = 0.0;                     ///< sup / B for B > 0, else 0
  double asymptotic_log_gradient = 0.0;   ///< value at the top grid node
};

/// Radial positive p-harmonic function on the model space: |v'| = S^{1-n
/// over p-1}, v by tail quadrature (v(inf) = 0).  The log gradient of v is
/// bounded by (n-1) B/(p-1) at infinity, certifying the exponential Harnack
/// two-sided bound.  For B = 0 requires p < n and the grid away from 0.
LogGradientReport p_harmonic_log_gradient(const ModelSpace& model, double p,
                                          std::span<const double> r_grid);

}  // namespace pgrad
