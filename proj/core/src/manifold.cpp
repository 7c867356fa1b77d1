#include "pgrad/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pgrad {

double ModelSpace::S(double r) const {
  if (B == 0.0) return r;
  return std::sinh(B * r) / B;
}

double ModelSpace::S_prime(double r) const {
  if (B == 0.0) return 1.0;
  return std::cosh(B * r);
}

double ModelSpace::log_S(double r) const {
  if (B == 0.0) return std::log(r);
  const double x = B * r;
  if (x < 350.0) return std::log(std::sinh(x) / B);
  // sinh x = e^x (1 - e^{-2x}) / 2
  return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * B);
}

double manifold_mu_threshold(const ProblemParams& params, double B) {
  if (B == 0.0) return 0.0;
  return std::pow((params.n - 1.0) * B * B, 1.0 / (params.q + 1.0 - params.p));
}

double manifold_lambda_form(const ProblemParams& params, const CurvatureBounds& curv, double R) {
  const double e = 1.0 / (params.q + 1.0 - params.p);
  const double ricci_branch = std::pow(R, 4.0) * curv.B * curv.B;
  const double near_branch = (1.0 + curv.B_p() * R) * R * R;
  return std::max(std::pow(ricci_branch, e), std::pow(near_branch, e));
}

SupersolutionReport bernstein_residual_manifold(const ProblemParams& params,
                                                const CurvatureBounds& curv, double R,
                                                double lambda, double mu,
                                                const BernsteinConstants& consts,
                                                std::span<const double> r_grid) {
  std::vector<double> grid;
  if (r_grid.empty()) {
    grid = default_barrier_grid(R);
    r_grid = grid;
  }
  return bernstein_residual(params, R, lambda, mu, curv.B, curv.Btilde, consts, r_grid);
}

double calibrate_manifold_scale(const ProblemParams& params, const CurvatureBounds& curv,
                                double R, const BernsteinConstants& consts) {
  const std::vector<double> grid = default_barrier_grid(R);
  const double mu = manifold_mu_threshold(params, curv.B);
  const double form = manifold_lambda_form(params, curv, R);
  auto valid = [&](double c) {
    return bernstein_residual(params, R, c * form, mu, curv.B, curv.Btilde, consts, grid).valid();
  };
  double hi = 1.0;
  int guard = 0;
  while (!valid(hi)) {
    hi *= 2.0;
    if (++guard > 400) throw NonConvergence("calibrate_manifold_scale: no valid scale found");
  }
  double lo = hi * 0.5;
  guard = 0;
  while (valid(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 400) return hi;
  }
  while ((hi - lo) > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (valid(mid) ? hi : lo) = mid;
  }
  return hi;
}

double gradient_bound_formula(const ProblemParams& params, const CurvatureBounds& curv, double d,
                              double c) {
  const double e = 1.0 / (params.q + 1.0 - params.p);
  const double plateau = std::pow(curv.B * curv.B, e);
  const double near = std::pow(1.0 + curv.B_p() * d, e) * std::pow(d, -2.0 * e);
  return c * std::max(plateau, near);
}

ManifoldGradientBound gradient_bound_manifold(const ProblemParams& params,
                                              const CurvatureBounds& curv, double d,
                                              const BernsteinConstants& consts) {
  if (!(d > 0.0)) throw std::invalid_argument("gradient_bound_manifold: d must be > 0");
  ManifoldGradientBound out;
  const double c = calibrate_manifold_scale(params, curv, d, consts);
  out.lambda = c * manifold_lambda_form(params, curv, d);
  out.mu = manifold_mu_threshold(params, curv.B);
  out.bound = out.lambda * std::pow(d, -4.0 / (params.q + 1.0 - params.p)) + out.mu;
  out.c_effective = out.bound / gradient_bound_formula(params, curv, d, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Radial solutions on the model space
// ---------------------------------------------------------------------------

namespace {

double volume_exponent(const ProblemParams& params) {
  return (params.n - 1.0) * (params.q + 1.0 - params.p) / (params.p - 1.0);
}

/// Tail integral int_r^infinity S^{-cprime} dt for B > 0, relative-accurate at
/// any depth: the exponential envelope exp(-cprime B y) is factored out and
/// the remaining O(1) integrand is taken over y = -ln(1-t)/(cprime B), which
/// the adaptive rule resolves in a handful of panels.
double tail_integral(const ProblemParams& params, const ModelSpace& model, double r) {
  const double cprime = volume_exponent(params);
  const double rate = cprime * model.B;
  const double scale = -cprime * model.log_S(r);
  auto g = [&](double t) {
    const double y = -std::log1p(-t) / rate;
    return std::exp(-cprime * model.log_S(r + y) - scale + rate * y) / rate;
  };
  QuadratureSpec quad;
  quad.abs_tol = 1e-14;
  quad.rel_tol = 1e-13;
  return std::exp(scale) * integrate(g, 0.0, 1.0, quad);
}

/// Integral of S^{-cprime} from the natural anchor (0 when convergent there,
/// 1 otherwise) to infinity.  Requires B > 0 for convergence at the far end.
double anchor_to_infinity(const ProblemParams& params, const ModelSpace& model) {
  const double cprime = volume_exponent(params);
  auto integrand = [&](double t) { return std::exp(-cprime * model.log_S(t)); };
  QuadratureSpec quad;
  quad.abs_tol = 1e-14;
  quad.rel_tol = 1e-13;
  double head = 0.0;
  if (cprime < 1.0) {
    QuadratureSpec hq = quad;
    hq.endpoint_exponent_hint = -cprime;
    head = integrate(integrand, 0.0, 1.0, hq);
  }
  return head + tail_integral(params, model, 1.0);
}

}  // namespace

RadialProfile solve_radial_hyperbolic(const ProblemParams& params, const ModelSpace& model,
                                      double K, std::span<const double> r_grid,
                                      const QuadratureSpec& quad) {
  if (r_grid.size() < 2) throw std::invalid_argument("solve_radial_hyperbolic: grid needs >= 2 nodes");
  for (size_t i = 0; i + 1 < r_grid.size(); ++i)
    if (!(r_grid[i] < r_grid[i + 1]))
      throw std::invalid_argument("solve_radial_hyperbolic: grid must be strictly increasing");
  if (!(r_grid.front() > 0.0))
    throw std::invalid_argument("solve_radial_hyperbolic: grid must be positive");
  if (model.n != params.n) throw std::invalid_argument("solve_radial_hyperbolic: dimension mismatch");

  const double cprime = volume_exponent(params);
  const double m1 = (params.q + 1.0 - params.p) / (params.p - 1.0);
  const size_t m = r_grid.size();
  auto integrand = [&](double t) { return std::exp(-cprime * model.log_S(t)); };

  QuadratureSpec gq;
  gq.abs_tol = 1e-300;  // segment increments are matched in relative terms
  gq.rel_tol = 1e-13;

  // Bracket at the grid nodes.  For B > 0 anchor the evaluation at infinity:
  // G(r) = G_inf - m1 * tail(r), which is cancellation-free however deep the
  // trajectory runs (the separatrix G_inf = 0 in particular).  For B = 0 the
  // tail diverges when q < q_c; anchor at 0 (or 1 past q_c) instead.
  std::vector<double> G(m);
  const bool tail_anchored = model.B > 0.0;
  std::vector<double> prefix(m);  // tail-anchored: tail(r_i); else anchor-to-r_i
  if (tail_anchored) {
    prefix[m - 1] = tail_integral(params, model, r_grid[m - 1]);
    for (size_t i = m - 1; i-- > 0;)
      prefix[i] = prefix[i + 1] + integrate(integrand, r_grid[i], r_grid[i + 1], gq);
    double G_inf = K + m1 * anchor_to_infinity(params, model);
    // Snap separatrix inputs: K from hyperbolic_separatrix_K cancels the
    // anchor integral up to rounding.
    if (std::fabs(G_inf) <= 1e-11 * std::fabs(K)) G_inf = 0.0;
    for (size_t i = 0; i < m; ++i) G[i] = G_inf - m1 * prefix[i];
  } else {
    if (cprime < 1.0) {
      QuadratureSpec hq = gq;
      hq.abs_tol = 1e-14;
      hq.endpoint_exponent_hint = -cprime;
      prefix[0] = integrate(integrand, 0.0, r_grid[0], hq);
    } else {
      prefix[0] = (r_grid[0] >= 1.0) ? integrate(integrand, 1.0, r_grid[0], gq)
                                     : -integrate(integrand, r_grid[0], 1.0, gq);
    }
    for (size_t i = 0; i + 1 < m; ++i)
      prefix[i + 1] = prefix[i] + integrate(integrand, r_grid[i], r_grid[i + 1], gq);
    for (size_t i = 0; i < m; ++i) G[i] = K + m1 * prefix[i];
  }

  const double gsign = G[0] > 0.0 ? 1.0 : -1.0;
  for (size_t i = 0; i < m; ++i) {
    if (!(gsign * G[i] > 0.0)) {
      std::ostringstream os;
      os << "solve_radial_hyperbolic: bracket crosses the blow-up locus by r = " << r_grid[i];
      throw DomainError(os.str());
    }
  }

  // |u'| = |G|^{-1/(q+1-p)} S^{(1-n)/(p-1)}, evaluated in logs: near the
  // separatrix plateau both factors run out of double range separately.
  auto du_from = [&](double r, double Gv) {
    const double lg = -std::log(std::fabs(Gv)) / (params.q + 1.0 - params.p) +
                      (1.0 - params.n) / (params.p - 1.0) * model.log_S(r);
    const double mag = std::exp(lg);
    return Gv > 0.0 ? -mag : mag;
  };
  // Bracket at an interior point, from the nearest tabulated node.
  auto G_at = [&](double s, size_t seg) {
    double inc;
    if (tail_anchored) {
      // tail(s) = tail(r_{seg+1}) + inc, and G = G_inf - m1 * tail
      inc = integrate(integrand, s, r_grid[seg + 1], gq);
      return G[seg + 1] - m1 * inc;
    }
    inc = integrate(integrand, r_grid[seg], s, gq);
    return G[seg] + m1 * inc;
  };

  RadialProfile prof;
  prof.r.assign(r_grid.begin(), r_grid.end());
  prof.u.resize(m);
  prof.du.resize(m);
  prof.r_min = 0.0;
  prof.r_max = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < m; ++i) prof.du[i] = du_from(r_grid[i], G[i]);

  QuadratureSpec useg = quad;
  useg.abs_tol = std::max(quad.abs_tol / static_cast<double>(m), 1e-15);
  prof.u[0] = 0.0;
  for (size_t i = 0; i + 1 < m; ++i) {
    auto f = [&](double s) { return du_from(s, G_at(s, i)); };
    prof.u[i + 1] = prof.u[i] + integrate(f, r_grid[i], r_grid[i + 1], useg);
  }
  return prof;
}

double hyperbolic_separatrix_K(const ProblemParams& params, const ModelSpace& model) {
  const double cprime = volume_exponent(params);
  if (!(cprime < 1.0))
    throw RegimeError("hyperbolic_separatrix_K: requires q < q_c (anchor at 0)");
  if (!(model.B > 0.0))
    throw RegimeError("hyperbolic_separatrix_K: requires B > 0 (no global separatrix at B = 0)");
  const double m1 = (params.q + 1.0 - params.p) / (params.p - 1.0);
  return -m1 * anchor_to_infinity(params, model);
}

LogGradientReport p_harmonic_log_gradient(const ModelSpace& model, double p,
                                          std::span<const double> r_grid) {
  if (!(p > 1.0)) throw std::invalid_argument("p_harmonic_log_gradient: p must be > 1");
  if (r_grid.size() < 2 || !(r_grid.front() > 0.0))
    throw std::invalid_argument("p_harmonic_log_gradient: need a positive grid");
  const double a = (model.n - 1.0) / (p - 1.0);
  if (model.B == 0.0 && !(a > 1.0))
    throw RegimeError("p_harmonic_log_gradient: B = 0 requires p < n for a decaying v");

  auto vprime = [&](double r) { return std::pow(model.S(r), -a); };
  QuadratureSpec quad;
  quad.abs_tol = 1e-13;
  quad.rel_tol = 1e-13;

  const size_t m = r_grid.size();
  std::vector<double> v(m);
  v[m - 1] = integrate(vprime, r_grid.back(), std::numeric_limits<double>::infinity(), quad);
  for (size_t i = m - 1; i-- > 0;)
    v[i] = v[i + 1] + integrate(vprime, r_grid[i], r_grid[i + 1], quad);

  LogGradientReport rep;
  rep.r.assign(r_grid.begin(), r_grid.end());
  rep.log_gradient.resize(m);
  for (size_t i = 0; i < m; ++i) {
    rep.log_gradient[i] = vprime(rep.r[i]) / v[i];
    rep.sup_log_gradient = std::max(rep.sup_log_gradient, rep.log_gradient[i]);
  }
  rep.kappa = model.B > 0.0 ? rep.sup_log_gradient / model.B : 0.0;
  rep.asymptotic_log_gradient = rep.log_gradient.back();
  return rep;
}

}  // namespace pgrad
