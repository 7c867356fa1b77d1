#pragma once

#include <stdexcept>
#include <string>

namespace pgrad {

/// Base class for all library error conditions. Input validation failures
/// use std::invalid_argument directly; everything thrown while computing
/// derives from Error so callers can map it to an exit code.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parameters outside the regime an operation is defined for
/// (e.g. asking for the singular-solution constant when q >= q_c).
class RegimeError : public Error {
public:
  explicit RegimeError(const std::string& msg) : Error(msg) {}
};

/// Evaluation point outside the natural domain of a solution family,
/// typically on or past a blow-up locus.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Adaptive quadrature exhausted its subdivision budget.
class NonConvergence : public Error {
public:
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

/// Integrand evaluated to NaN/inf strictly inside the interval.
class NonFinite : public Error {
public:
  explicit NonFinite(const std::string& msg) : Error(msg) {}
};

/// ODE step size underflowed, usually approaching a blow-up.
/// Carries the last radius reached with a valid state.
class StepUnderflow : public Error {
public:
  StepUnderflow(const std::string& msg, double last_valid)
      : Error(msg), last_valid_r(last_valid) {}
  double last_valid_r;
};

/// |u'| fell below the degeneracy threshold: the radial solution has
/// become constant and the (u, w) formulation stops being informative.
class DegenerateGradient : public Error {
public:
  DegenerateGradient(const std::string& msg, double last_valid)
      : Error(msg), last_valid_r(last_valid) {}
  double last_valid_r;
};

/// Root finder was handed an interval without a sign change.
class NoBracket : public Error {
public:
  explicit NoBracket(const std::string& msg) : Error(msg) {}
};

/// Fit window holds fewer samples than the method needs.
class InsufficientSamples : public Error {
public:
  explicit InsufficientSamples(const std::string& msg) : Error(msg) {}
};

/// Log-log fit input changes sign inside the window.
class SignChange : public Error {
public:
  explicit SignChange(const std::string& msg) : Error(msg) {}
};

/// Two classification branches both pass; surfaced, never tie-broken.
class ConflictingFits : public Error {
public:
  explicit ConflictingFits(const std::string& msg) : Error(msg) {}
};

/// Flux ratio fails to settle (u/mu_p has no finite limit).
class Divergent : public Error {
public:
  explicit Divergent(const std::string& msg) : Error(msg) {}
};

}  // namespace pgrad
