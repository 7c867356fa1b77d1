#include "pgrad/params.hpp"

#include <cmath>
#include <sstream>

namespace pgrad {

ProblemParams::ProblemParams(int n_, double p_, double q_) : n(n_), p(p_), q(q_) {
  if (n < 2) throw std::invalid_argument("ProblemParams: n must be >= 2");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("ProblemParams: p must be finite and > 1");
  if (!(q > p - 1.0) || !std::isfinite(q))
    throw std::invalid_argument("ProblemParams: q must be finite and > p - 1");
}

namespace {

void require_p_le_n(const ProblemParams& params, const char* op) {
  if (params.p > static_cast<double>(params.n)) {
    std::ostringstream os;
    os << op << ": requires 1 < p <= n, got p = " << params.p << ", n = " << params.n;
    throw RegimeError(os.str());
  }
}

}  // namespace

double critical_exponent_qc(const ProblemParams& params) {
  return params.n * (params.p - 1.0) / (params.n - 1.0);
}

double beta_q(const ProblemParams& params) {
  return (params.p - params.q) / (params.q + 1.0 - params.p);
}

double coefficient_b(const ProblemParams& params) {
  return (params.n * (params.p - 1.0) - (params.n - 1.0) * params.q) /
         (params.q + 1.0 - params.p);
}

double lambda_singular(const ProblemParams& params) {
  require_p_le_n(params, "lambda_singular");
  const double qc = critical_exponent_qc(params);
  if (!(params.q < qc)) {
    std::ostringstream os;
    os << "lambda_singular: requires q < q_c = " << qc << ", got q = " << params.q;
    throw RegimeError(os.str());
  }
  const double beta = beta_q(params);
  const double inner = beta * (params.p - 1.0) + params.p - params.n;
  return std::pow(inner, 1.0 / (params.q + 1.0 - params.p)) / beta;
}

double lambda_tilde(const ProblemParams& params) {
  require_p_le_n(params, "lambda_tilde");
  const double qc = critical_exponent_qc(params);
  if (!(params.q > qc) || !(params.q < params.p)) {
    std::ostringstream os;
    os << "lambda_tilde: requires q_c < q < p (q_c = " << qc << "), got q = " << params.q;
    throw RegimeError(os.str());
  }
  const double beta = beta_q(params);
  const double inner = params.n - params.p - beta * (params.p - 1.0);
  return std::pow(inner, 1.0 / (params.q + 1.0 - params.p)) / beta;
}

double q_tilde(const ProblemParams& params) {
  return params.p - 1.0 + params.p / params.n;
}

double q_star(const ProblemParams& params) {
  return params.q / (params.q + 1.0 - params.p);
}

double mu_p_flux_prefactor(const ProblemParams& params) {
  if (params.p < static_cast<double>(params.n))
    return (params.p - 1.0) / (params.n - params.p);
  return 1.0;
}

Regime classify_regime(const ProblemParams& params) {
  Regime out{};
  out.q_c = critical_exponent_qc(params);
  out.q_tilde = q_tilde(params);
  out.at_critical = std::fabs(params.q - out.q_c) <= kCriticalTol;
  out.above_tilde = params.q >= out.q_tilde - kCriticalTol;

  if (std::fabs(params.q - params.p) <= kCriticalTol) {
    out.tag = RegimeTag::QEqualsP;
  } else if (out.at_critical) {
    out.tag = RegimeTag::Critical;
  } else if (params.q < out.q_c) {
    out.tag = RegimeTag::SubcriticalAbsorption;
  } else if (params.q < params.p) {
    out.tag = RegimeTag::SupercriticalBelowP;
  } else {
    out.tag = RegimeTag::QAboveP;
  }
  return out;
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::SubcriticalAbsorption: return "SubcriticalAbsorption";
    case RegimeTag::Critical: return "Critical";
    case RegimeTag::SupercriticalBelowP: return "SupercriticalBelowP";
    case RegimeTag::QEqualsP: return "QEqualsP";
    case RegimeTag::QAboveP: return "QAboveP";
  }
  return "?";
}

}  // namespace pgrad
