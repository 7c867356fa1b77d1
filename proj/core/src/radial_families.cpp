#include "pgrad/radial_families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pgrad {

namespace {

bool is_critical_q(const ProblemParams& params) {
  return std::fabs(params.q - critical_exponent_qc(params)) <= kCriticalTol;
}

void require_subcritical(const ProblemParams& params, const char* what) {
  if (params.p > static_cast<double>(params.n) ||
      !(params.q < critical_exponent_qc(params)) || is_critical_q(params)) {
    std::ostringstream os;
    os << what << ": requires 1 < p <= n and p-1 < q < q_c";
    throw RegimeError(os.str());
  }
}

double blowup_radius_critical(const ProblemParams& params, double K) {
  // bracket (n-1)^{-1} ln r + K vanishes at r = exp(-(n-1) K)
  return std::exp(-(params.n - 1.0) * K);
}

}  // namespace

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

FamilyDescriptor make_fundamental(const ProblemParams& params) {
  if (params.p > static_cast<double>(params.n))
    throw RegimeError("FundamentalMuP: requires p <= n");
  return {FamilyKind::FundamentalMuP, params, {}, {}, {}};
}

FamilyDescriptor make_singular_positive(const ProblemParams& params) {
  require_subcritical(params, "SingularPositiveU");
  return {FamilyKind::SingularPositiveU, params, {}, {}, {}};
}

FamilyDescriptor make_singular_negative(const ProblemParams& params) {
  lambda_tilde(params);  // validates q_c < q < p, p <= n
  return {FamilyKind::SingularNegativeV, params, {}, {}, {}};
}

FamilyDescriptor make_regular_flux(const ProblemParams& params, double k) {
  require_subcritical(params, "RegularFluxK");
  if (!(k > 0.0)) throw std::invalid_argument("RegularFluxK: requires k > 0");
  return {FamilyKind::RegularFluxK, params, k, {}, {}};
}

FamilyDescriptor make_strong_singular(const ProblemParams& params) {
  require_subcritical(params, "StrongSingular");
  return {FamilyKind::StrongSingular, params, {}, {}, {}};
}

FamilyDescriptor make_global(const ProblemParams& params, double k, double M) {
  require_subcritical(params, "GlobalKM");
  if (!(k > 0.0)) throw std::invalid_argument("GlobalKM: requires k > 0");
  if (!(M >= 0.0)) throw std::invalid_argument("GlobalKM: requires M >= 0");
  return {FamilyKind::GlobalKM, params, k, M, {}};
}

FamilyDescriptor make_blowup(const ProblemParams& params, double eps) {
  require_subcritical(params, "BlowupEps");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("BlowupEps: requires 0 < eps < 1");
  return {FamilyKind::BlowupEps, params, {}, {}, eps};
}

FamilyDescriptor make_critical_negative(const ProblemParams& params, double K) {
  if (!is_critical_q(params) || params.p > static_cast<double>(params.n))
    throw RegimeError("CriticalNegativeProfile: requires q = q_c and p <= n");
  return {FamilyKind::CriticalNegativeProfile, params, K, {}, {}};
}

double FamilyDescriptor::natural_r_min() const {
  if (kind == FamilyKind::BlowupEps) return *eps;
  return 0.0;
}

double FamilyDescriptor::natural_r_max() const {
  switch (kind) {
    case FamilyKind::RegularFluxK:
    case FamilyKind::StrongSingular:
    case FamilyKind::BlowupEps:
      return 1.0;
    case FamilyKind::CriticalNegativeProfile:
      return std::min(1.0, blowup_radius_critical(params, k.value_or(0.0)));
    default:
      return std::numeric_limits<double>::infinity();
  }
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::FundamentalMuP: return "FundamentalMuP";
    case FamilyKind::SingularPositiveU: return "SingularPositiveU";
    case FamilyKind::SingularNegativeV: return "SingularNegativeV";
    case FamilyKind::RegularFluxK: return "RegularFluxK";
    case FamilyKind::StrongSingular: return "StrongSingular";
    case FamilyKind::GlobalKM: return "GlobalKM";
    case FamilyKind::BlowupEps: return "BlowupEps";
    case FamilyKind::CriticalNegativeProfile: return "CriticalNegativeProfile";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// mu_p and the first integral
// ---------------------------------------------------------------------------

double mu_p(const ProblemParams& params, double r) {
  if (params.p > static_cast<double>(params.n)) throw RegimeError("mu_p: requires p <= n");
  if (!(r > 0.0)) throw std::invalid_argument("mu_p: requires r > 0");
  if (params.p == static_cast<double>(params.n)) return -std::log(r);
  return std::pow(r, (params.p - params.n) / (params.p - 1.0));
}

double mu_p_prime(const ProblemParams& params, double r) {
  if (params.p > static_cast<double>(params.n)) throw RegimeError("mu_p_prime: requires p <= n");
  if (!(r > 0.0)) throw std::invalid_argument("mu_p_prime: requires r > 0");
  if (params.p == static_cast<double>(params.n)) return -1.0 / r;
  const double a = (params.p - params.n) / (params.p - 1.0);
  return a * std::pow(r, a - 1.0);
}

double first_integral_bracket(const ProblemParams& params, double r, double K) {
  if (!(r > 0.0)) throw std::invalid_argument("first_integral_bracket: requires r > 0");
  if (is_critical_q(params)) {
    return std::log(r) / (params.n - 1.0) + K;
  }
  const double b = coefficient_b(params);
  const double eta = (params.q + 1.0 - params.p) * b / (params.p - 1.0);
  return std::pow(r, eta) / b + K;
}

double u_prime_exact(const ProblemParams& params, double r, double K, FamilySign sign) {
  const double G = first_integral_bracket(params, r, K);
  if (sign == FamilySign::Positive && !(G > 0.0)) {
    std::ostringstream os;
    os << "u_prime_exact: bracket " << G << " <= 0 at r = " << r
       << " (blow-up locus of the positive family)";
    throw DomainError(os.str());
  }
  if (sign == FamilySign::Negative && !(G < 0.0)) {
    std::ostringstream os;
    os << "u_prime_exact: bracket " << G << " >= 0 at r = " << r
       << " (blow-up locus of the negative family)";
    throw DomainError(os.str());
  }
  const double mag = std::pow(std::fabs(G), -1.0 / (params.q + 1.0 - params.p)) *
                     std::pow(r, (1.0 - params.n) / (params.p - 1.0));
  return (G > 0.0) ? -mag : mag;
}

double family_first_integral_K(const FamilyDescriptor& desc) {
  const ProblemParams& pp = desc.params;
  switch (desc.kind) {
    case FamilyKind::RegularFluxK:
    case FamilyKind::GlobalKM:
      return std::pow(*desc.k, pp.p - 1.0 - pp.q);
    case FamilyKind::StrongSingular:
    case FamilyKind::SingularPositiveU:
    case FamilyKind::SingularNegativeV:
      return 0.0;
    case FamilyKind::BlowupEps: {
      const double b = coefficient_b(pp);
      const double eta = (pp.q + 1.0 - pp.p) * b / (pp.p - 1.0);
      return -std::pow(*desc.eps, eta) / b;
    }
    case FamilyKind::CriticalNegativeProfile:
      return desc.k.value_or(0.0);
    case FamilyKind::FundamentalMuP:
      throw std::invalid_argument("family_first_integral_K: FundamentalMuP satisfies w' = 0");
  }
  throw std::invalid_argument("family_first_integral_K: unknown kind");
}

// ---------------------------------------------------------------------------
// Profile evaluation
// ---------------------------------------------------------------------------

namespace {

FamilySign family_sign(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::SingularNegativeV:
    case FamilyKind::CriticalNegativeProfile:
      return FamilySign::Negative;
    default:
      return FamilySign::Positive;
  }
}

void validate_grid(const FamilyDescriptor& desc, std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("evaluate_family: grid needs >= 2 nodes");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("evaluate_family: grid must be strictly increasing");
  const double lo = desc.natural_r_min(), hi = desc.natural_r_max();
  if (!(grid.front() > lo)) {
    std::ostringstream os;
    os << "evaluate_family: grid reaches r = " << grid.front()
       << ", at or below the domain edge r = " << lo;
    throw DomainError(os.str());
  }
  const bool open_top = desc.kind == FamilyKind::CriticalNegativeProfile;
  if (open_top ? !(grid.back() < hi) : !(grid.back() <= hi)) {
    std::ostringstream os;
    os << "evaluate_family: grid reaches r = " << grid.back() << ", past the domain edge r = " << hi;
    throw DomainError(os.str());
  }
}

}  // namespace

RadialProfile evaluate_family(const FamilyDescriptor& desc, std::span<const double> r_grid,
                              const QuadratureSpec& quad) {
  validate_grid(desc, r_grid);
  const ProblemParams& pp = desc.params;
  RadialProfile prof;
  prof.family = desc;
  prof.r.assign(r_grid.begin(), r_grid.end());
  prof.r_min = desc.natural_r_min();
  prof.r_max = desc.natural_r_max();
  const size_t m = prof.r.size();
  prof.u.resize(m);
  prof.du.resize(m);

  // Closed-form kinds first.
  if (desc.kind == FamilyKind::FundamentalMuP) {
    for (size_t i = 0; i < m; ++i) {
      prof.u[i] = mu_p(pp, prof.r[i]);
      prof.du[i] = mu_p_prime(pp, prof.r[i]);
    }
    return prof;
  }
  if (desc.kind == FamilyKind::SingularPositiveU || desc.kind == FamilyKind::SingularNegativeV) {
    const double beta = beta_q(pp);
    const double lam = desc.kind == FamilyKind::SingularPositiveU ? lambda_singular(pp)
                                                                  : -lambda_tilde(pp);
    for (size_t i = 0; i < m; ++i) {
      prof.u[i] = lam * std::pow(prof.r[i], -beta);
      prof.du[i] = -beta * lam * std::pow(prof.r[i], -beta - 1.0);
    }
    return prof;
  }

  const double K = family_first_integral_K(desc);
  const FamilySign sign = family_sign(desc.kind);
  auto du_exact = [&](double s) { return u_prime_exact(pp, s, K, sign); };
  for (size_t i = 0; i < m; ++i) prof.du[i] = du_exact(prof.r[i]);

  // Anchor of the cumulative quadrature.
  double anchor_r, anchor_u;
  switch (desc.kind) {
    case FamilyKind::RegularFluxK:
    case FamilyKind::StrongSingular:
    case FamilyKind::BlowupEps:
      anchor_r = 1.0;
      anchor_u = 0.0;
      break;
    case FamilyKind::CriticalNegativeProfile:
      anchor_r = prof.r.back();
      anchor_u = 0.0;
      break;
    case FamilyKind::GlobalKM:
      anchor_r = std::numeric_limits<double>::infinity();
      anchor_u = *desc.M;
      break;
    default:
      throw std::invalid_argument("evaluate_family: unhandled kind");
  }

  QuadratureSpec seg_quad = quad;
  seg_quad.abs_tol = quad.abs_tol / static_cast<double>(m + 1);
  seg_quad.endpoint_exponent_hint.reset();

  // u(r_i) = anchor_u - int_{r_i}^{anchor} u'(s) ds, accumulated right-to-left.
  double acc = 0.0;  // integral from r to anchor
  if (std::isinf(anchor_r)) {
    acc = integrate(du_exact, prof.r.back(), anchor_r, seg_quad);
  } else if (prof.r.back() < anchor_r) {
    acc = integrate(du_exact, prof.r.back(), anchor_r, seg_quad);
  }
  prof.u[m - 1] = anchor_u - acc;
  for (size_t i = m - 1; i-- > 0;) {
    acc = integrate(du_exact, prof.r[i], prof.r[i + 1], seg_quad);
    prof.u[i] = prof.u[i + 1] - acc;
  }
  return prof;
}

std::vector<std::function<double(double)>> flux_ratio_basis(const ProblemParams& params) {
  std::vector<std::function<double(double)>> basis;
  if (params.p == static_cast<double>(params.n)) {
    // ratio = k (1 - A/L + B r^eta / L + ...) with L = ln(1/r)
    basis.push_back([](double r) { return -1.0 / std::log(r); });
    basis.push_back([](double r) {
      const double L = -std::log(r);
      return 1.0 / (L * L);
    });
    const double eta = (params.n * (params.p - 1.0) - (params.n - 1.0) * params.q) /
                       (params.p - 1.0);
    if (eta > 1e-12) {
      basis.push_back([eta](double r) { return std::pow(r, eta) / -std::log(r); });
    }
    return basis;
  }
  const double s0 = (params.n - params.p) / (params.p - 1.0);
  const double b = coefficient_b(params);
  const double eta = (params.q + 1.0 - params.p) * b / (params.p - 1.0);
  std::vector<double> pures;
  bool with_log = false;
  // Exponents below 0.02 or closer than 0.02 to one another produce
  // near-collinear columns over any few-decade window; drop them (their
  // contribution is near-constant and lands in the limit's error budget).
  auto add_pure = [&pures](double e) {
    if (e < 0.02) return;
    for (double have : pures)
      if (std::fabs(have - e) <= 0.02) return;
    pures.push_back(e);
  };
  if (eta > 1e-12) {
    for (int j = 1; j <= 6 && pures.size() < 5; ++j) {
      const double e = j * eta;
      if (std::fabs(e - s0) < 1e-9) {
        with_log = true;
      } else if (e < s0) {
        add_pure(e);
      } else {
        break;
      }
    }
  }
  add_pure(s0);
  std::sort(pures.begin(), pures.end());
  for (double e : pures)
    basis.push_back([e](double r) { return std::pow(r, e); });
  if (with_log)
    basis.push_back([s0](double r) { return std::pow(r, s0) * std::log(1.0 / r); });
  return basis;
}

double asymptotic_profile(const FamilyDescriptor& desc, double r, double r_small) {
  if (!(r > 0.0) || !(r <= r_small))
    throw std::invalid_argument("asymptotic_profile: requires 0 < r <= r_small");
  const ProblemParams& pp = desc.params;
  switch (desc.kind) {
    case FamilyKind::FundamentalMuP:
      return mu_p(pp, r);
    case FamilyKind::RegularFluxK:
    case FamilyKind::GlobalKM:
      return *desc.k * mu_p_flux_prefactor(pp) * mu_p(pp, r);
    case FamilyKind::SingularPositiveU:
    case FamilyKind::StrongSingular:
      return lambda_singular(pp) * std::pow(r, -beta_q(pp));
    case FamilyKind::SingularNegativeV:
      return -lambda_tilde(pp) * std::pow(r, -beta_q(pp));
    case FamilyKind::CriticalNegativeProfile: {
      // Shape only: the multiplicative constant is not fixed by the theory.
      const double L = -std::log(r);
      if (pp.p == static_cast<double>(pp.n)) return -std::log(L);
      return -std::pow(r, (pp.p - pp.n) / (pp.p - 1.0)) *
             std::pow(L, -(pp.n - 1.0) / (pp.p - 1.0));
    }
    case FamilyKind::BlowupEps:
      throw RegimeError("asymptotic_profile: BlowupEps has no r -> 0 asymptotics");
  }
  throw std::invalid_argument("asymptotic_profile: unknown kind");
}

// ---------------------------------------------------------------------------
// Profile interpolation
// ---------------------------------------------------------------------------

namespace {

size_t bracket_index(const std::vector<double>& r, double at) {
  if (r.size() < 2 || at < r.front() || at > r.back())
    throw std::invalid_argument("RadialProfile: query outside sampled range");
  const auto it = std::upper_bound(r.begin(), r.end(), at);
  size_t i = static_cast<size_t>(std::distance(r.begin(), it));
  if (i > 0) --i;
  if (i + 1 >= r.size()) i = r.size() - 2;
  return i;
}

}  // namespace

double RadialProfile::value(double at) const {
  const size_t i = bracket_index(r, at);
  const double h = r[i + 1] - r[i];
  const double t = (at - r[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

double RadialProfile::derivative(double at) const {
  const size_t i = bracket_index(r, at);
  const double t = (at - r[i]) / (r[i + 1] - r[i]);
  return (1.0 - t) * du[i] + t * du[i + 1];
}

}  // namespace pgrad
