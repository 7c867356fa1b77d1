#include "pgrad/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pgrad {

double WState::u_prime(const ProblemParams& params) const {
  const double mag = std::pow(std::fabs(w) * std::pow(r, 1.0 - params.n), 1.0 / (params.p - 1.0));
  return (w >= 0.0) ? mag : -mag;
}

WState first_integral(const ProblemParams& params, double r, double K) {
  const double G = first_integral_bracket(params, r, K);
  if (G == 0.0) throw DomainError("first_integral: bracket vanishes (blow-up locus)");
  const double mag = std::pow(std::fabs(G), -(params.p - 1.0) / (params.q + 1.0 - params.p));
  return WState{r, G > 0.0 ? -mag : mag};
}

// ---------------------------------------------------------------------------
// Direct integration in (u, w), t = ln r
// ---------------------------------------------------------------------------

DirectResult integrate_direct_partial(const ProblemParams& params, double r0, double u0,
                                      double du0, double r1, const OdeSpec& spec,
                                      std::span<const double> r_nodes) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) throw std::invalid_argument("integrate_direct: radii must be > 0");
  if (r0 == r1) throw std::invalid_argument("integrate_direct: r0 == r1");
  if (du0 == 0.0)
    throw std::invalid_argument("integrate_direct: du0 = 0 (only constants have critical points)");

  const double n = params.n, p = params.p, q = params.q;
  const double w_exp = (n * (p - 1.0) - (n - 1.0) * q) / (p - 1.0);
  const double u_exp = (p - n) / (p - 1.0);

  auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    const double w = y[1];
    const double aw = std::fabs(w);
    const double du = std::pow(aw, 1.0 / (p - 1.0)) * std::exp(t * u_exp);
    dy[0] = (w >= 0.0) ? du : -du;
    dy[1] = std::pow(aw, q / (p - 1.0)) * std::exp(t * w_exp);
  };
  auto event = [&](double t, const std::vector<double>& y) -> int {
    // Blow-up is judged on u alone: singular-at-the-origin trajectories have
    // unbounded u' with moderate u, and w = r^{n-1}|u'|^{p-1} outruns both
    // when p > 2; only a moving singularity sends u itself to infinity.
    if (std::fabs(y[0]) > kBlowupMagnitude) return 1;
    const double du = std::pow(std::fabs(y[1]), 1.0 / (p - 1.0)) * std::exp(t * (1.0 - n) / (p - 1.0));
    if (du < kDegenerateGradient) return 2;
    return 0;
  };

  const double w0 = std::pow(r0, n - 1.0) * std::pow(std::fabs(du0), p - 1.0) * (du0 > 0 ? 1.0 : -1.0);
  std::vector<double> t_nodes(r_nodes.size());
  std::map<double, double> r_of_t;  // recover the exact requested radii
  for (size_t i = 0; i < r_nodes.size(); ++i) {
    if (!(r_nodes[i] > 0.0)) throw std::invalid_argument("integrate_direct: nodes must be > 0");
    t_nodes[i] = std::log(r_nodes[i]);
    r_of_t[t_nodes[i]] = r_nodes[i];
  }
  r_of_t[std::log(r0)] = r0;
  r_of_t[std::log(r1)] = r1;

  const OdeResult ode = solve_ivp(rhs, std::log(r0), {u0, w0}, std::log(r1), spec, t_nodes, event);

  DirectResult out;
  out.last_r = std::exp(ode.last_t);
  switch (ode.status) {
    case OdeStatus::Completed: out.reason = StopReason::Completed; break;
    case OdeStatus::StepUnderflow: out.reason = StopReason::Underflow; break;
    case OdeStatus::EventStop:
      out.reason = (ode.event_code == 1) ? StopReason::Blowup : StopReason::DegenerateGradient;
      break;
  }

  RadialProfile& prof = out.profile;
  const bool ascending = r1 > r0;
  const size_t m = ode.t.size();
  prof.r.reserve(m);
  prof.u.reserve(m);
  prof.du.reserve(m);
  for (size_t idx = 0; idx < m; ++idx) {
    const size_t i = ascending ? idx : m - 1 - idx;
    const auto hit = r_of_t.find(ode.t[i]);
    const double r = hit != r_of_t.end() ? hit->second : std::exp(ode.t[i]);
    prof.r.push_back(r);
    prof.u.push_back(ode.y[i][0]);
    prof.du.push_back(WState{r, ode.y[i][1]}.u_prime(params));
  }
  prof.r_min = prof.r.front();
  prof.r_max = prof.r.back();

  // w is nondecreasing in r along any trajectory (w' is a pure power of |w|);
  // verify on the accepted steps.
  for (size_t idx = 0; idx + 1 < m; ++idx) {
    const double wa = ode.y[idx][1], wb = ode.y[idx + 1][1];
    const double dw = ascending ? wb - wa : wa - wb;
    if (dw < -1e-9 * (std::fabs(wa) + std::fabs(wb)))
      throw Error("integrate_direct: w-monotonicity violated along trajectory");
  }
  return out;
}

RadialProfile integrate_direct(const ProblemParams& params, double r0, double u0, double du0,
                               double r1, const OdeSpec& spec, std::span<const double> r_nodes) {
  DirectResult res = integrate_direct_partial(params, r0, u0, du0, r1, spec, r_nodes);
  std::ostringstream os;
  switch (res.reason) {
    case StopReason::Completed:
      return std::move(res.profile);
    case StopReason::Blowup:
    case StopReason::Underflow:
      os << "integrate_direct: trajectory blew up near r = " << res.last_r;
      throw StepUnderflow(os.str(), res.last_r);
    case StopReason::DegenerateGradient:
      os << "integrate_direct: |u'| fell below " << kDegenerateGradient << " at r = " << res.last_r
         << " (solution constant from here)";
      throw DegenerateGradient(os.str(), res.last_r);
  }
  throw Error("integrate_direct: unreachable");
}

// ---------------------------------------------------------------------------
// Shooting for the flux constant
// ---------------------------------------------------------------------------

namespace {

/// Flux of the unit-ball solution with first-integral constant K, measured as
/// the accelerated limit of u(r) / (prefactor * mu_p(r)) over a geometric
/// r-sequence.  The correction terms of the ratio are known analytically
/// (flux_ratio_basis), so a least-squares extrapolation over a deep window
/// reaches well below 1e-4 relative accuracy.
double flux_of_K(const ProblemParams& params, double K) {
  const double pref = mu_p_flux_prefactor(params);
  auto du = [&](double s) { return u_prime_exact(params, s, K, FamilySign::Positive); };

  QuadratureSpec quad;
  quad.abs_tol = 1e-12;
  quad.rel_tol = 1e-12;

  const int levels = 10;
  std::vector<double> rs(levels), ratio(levels);
  double r_hi = 1e-4;
  double u_acc = -integrate(du, r_hi, 1.0, quad);  // u(r_hi), u(1) = 0
  for (int j = 0; j < levels; ++j) {
    rs[j] = r_hi;
    ratio[j] = u_acc / (pref * mu_p(params, r_hi));
    if (j + 1 < levels) {
      const double r_lo = r_hi / 4.0;
      u_acc -= integrate(du, r_lo, r_hi, quad);
      r_hi = r_lo;
    }
  }
  const auto basis = flux_ratio_basis(params);
  return basis_extrapolate(rs, ratio, basis);
}

}  // namespace

double shoot_for_flux(const ProblemParams& params, double k, double tol) {
  if (!(k > 0.0)) throw std::invalid_argument("shoot_for_flux: requires k > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("shoot_for_flux: requires tol > 0");
  make_strong_singular(params);  // regime validation: p-1 < q < q_c, p <= n

  // flux_of_K is strictly decreasing in K; match in log scale so the scan is
  // insensitive to the fluxes spanning many orders, skipping overflowed ends.
  auto g = [&](double K) -> double {
    const double flux = flux_of_K(params, K);
    if (!(flux > 0.0) || !std::isfinite(flux)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(flux / k);
  };
  double K_lo = 0.0, K_hi = 0.0;
  bool bracketed = false;
  bool have_prev = false;
  double prev_K = 0.0, prev_g = 0.0;
  for (int e = -40; e <= 40; ++e) {
    const double K = std::ldexp(1.0, e);
    const double gv = g(K);
    if (!std::isfinite(gv)) {
      have_prev = false;
      continue;
    }
    if (gv == 0.0) return K;
    if (have_prev && prev_g * gv < 0.0) {
      K_lo = prev_K;
      K_hi = K;
      bracketed = true;
      break;
    }
    prev_K = K;
    prev_g = gv;
    have_prev = true;
  }
  if (!bracketed) throw NoBracket("shoot_for_flux: k outside the scanned bracket");
  return find_root(g, K_lo, K_hi, tol * 0.5 * (K_lo + K_hi));
}

}  // namespace pgrad
