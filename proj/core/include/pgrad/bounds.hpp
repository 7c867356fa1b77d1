#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pgrad/numerics.hpp"
#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"

namespace pgrad {

/// Constants of the elliptic inequality satisfied by z = |grad u|^2:
///   A(z) + C z^{q+2-p} - D |grad z|^2 / z <= 0,
/// with A uniformly elliptic between theta and Theta.
struct BernsteinConstants {
  double C;      ///< coefficient of z^{q+2-p}, at most 1/(2n)
  double D;      ///< coefficient of |grad z|^2 / z
  double theta;  ///< min{1, p-1}
  double Theta;  ///< max{1, p-1}

  /// Defaults re-derived from the inequality chain with
  /// eps = (q+1-p)/(8n(q+2-p)); any valid pair gives a valid barrier.
  static BernsteinConstants defaults(const ProblemParams& params);
};

/// Pointwise evaluation of the barrier operator on
///   w(r) = lambda (R^2 - r^2)^{-2/(q+1-p)} + mu.
/// residual_grid stores L(w) scaled by (R^2-r^2)^{sigma+2}/lambda, which is a
/// positive multiple pointwise and stays O(1) up to the cutoff; residual_min
/// is its minimum and endpoint_bracket the analytic t -> 0 limit coefficient
/// that fixes the sign on [cutoff, R).
struct SupersolutionReport {
  double lambda = 0.0;
  double mu = 0.0;
  double residual_min = 0.0;
  double endpoint_bracket = 0.0;
  std::vector<double> r_grid;
  std::vector<double> residual_grid;
  BernsteinConstants constants{};
  double R = 0.0;
  double B = 0.0;       ///< Ricci scale (0 = Euclidean)
  double Btilde = 0.0;  ///< sectional scale (0 = Euclidean)

  bool valid() const { return residual_min >= 0.0 && endpoint_bracket >= 0.0; }
};

/// Relative cutoff: the residual grid covers [0, R (1 - kBarrierCutoff)].
inline constexpr double kBarrierCutoff = 1e-6;

/// Default residual grid on [0, R(1 - cutoff)], 512 uniform nodes + endpoint.
std::vector<double> default_barrier_grid(double R);

/// Evaluates L(w) = A(w) + C w^{q+2-p} - D |grad w|^2/w - (n-1) B^2 w on the
/// grid.  The direction of grad u being unknown, the Hessian term of A uses
/// whichever closed-form eigenvalue of D^2 w (radial w'' or tangential
/// bounded by (1 + Btilde r)/r w') minimizes the residual.  B = Btilde = 0
/// and mu = 0 is the Euclidean case.
SupersolutionReport bernstein_residual(const ProblemParams& params, double R, double lambda,
                                       double mu, double B, double Btilde,
                                       const BernsteinConstants& consts,
                                       std::span<const double> r_grid);

/// Euclidean barrier residual (B = Btilde = mu = 0).
SupersolutionReport bernstein_residual_euclidean(const ProblemParams& params, double R,
                                                 double lambda, const BernsteinConstants& consts,
                                                 std::span<const double> r_grid = {});

/// Least lambda (bisection, 1e-6 relative) making the Euclidean barrier a
/// supersolution on the default grid.  The implied gradient bound at the ball
/// center is z(a) <= lambda R^{-4/(q+1-p)}.
double calibrate_lambda(const ProblemParams& params, double R, const BernsteinConstants& consts);

/// Distance-to-boundary convention for gradient products.
struct BoundaryGeometry {
  enum class Kind { PunctureOnly, Ball, PuncturedBall } kind = Kind::PunctureOnly;
  double R = 1.0;  ///< ball radius (Ball, PuncturedBall)

  double distance(double r) const;
};

struct GradientBoundReport {
  double sup_product = 0.0;  ///< sup over grid of |u'(r)| d(r)^{1/(q+1-p)}
  double argmax_r = 0.0;
};

GradientBoundReport gradient_bound_check(const RadialProfile& profile, const ProblemParams& params,
                                         const BoundaryGeometry& boundary);

/// Solution bound transported from the gradient estimate along radial
/// segments: c |d^{-beta_q} - R^{-beta_q}| + boundary_max for p != q and the
/// log form at p = q, with c = sqrt(calibrate_lambda(1)) / |beta_q| the
/// constant the corollary proofs integrate.
double pointwise_bound(const ProblemParams& params, double x_dist, double R, double boundary_max,
                       const BernsteinConstants& consts);

/// max/min of a positive radial solution over the concentric half ball
/// B_{R/2}(center).  The closed ball B_R(center) must avoid the puncture and
/// the domain boundary.
double harnack_ratio(const std::function<double(double)>& u, double center_r, double R,
                     std::pair<double, double> domain);
double harnack_ratio(const RadialProfile& profile, double center_r, double R);

struct LiouvilleEntry {
  double k = 0.0;
  double M = 0.0;
  FitResult decay_fit;       ///< log-log fit of |u'| on [r_lo, r_hi]
  double sup_product = 0.0;  ///< sup of |u'(r)| r^{1/(q+1-p)}
};

struct LiouvilleReport {
  std::vector<LiouvilleEntry> entries;
  std::vector<std::pair<double, double>> grad_table;  ///< (R, max over entries of |u'(R)|)
  double expected_decay = 0.0;                        ///< -1/(q+1-p)
  bool decay_confirmed = false;                       ///< all fits within 1% of expected
};

/// Certifies on entire-space families that the gradient estimate with
/// d(x) = R -> infinity leaves only constants: |u'| decays like
/// r^{-1/(q+1-p)} so sup_R |u'(R)| -> 0.
LiouvilleReport liouville_check(const ProblemParams& params,
                                std::span<const std::pair<double, double>> k_M_values,
                                double r_lo = 1.0, double r_hi = 1e4);

}  // namespace pgrad
