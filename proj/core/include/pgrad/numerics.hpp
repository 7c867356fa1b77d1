#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pgrad/errors.hpp"

namespace pgrad {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  /// Known power-law exponent of the integrand at the LOWER endpoint,
  /// f(s) ~ C (s - a)^hint with hint in (-1, 0).  When set, the integral is
  /// transformed by s = a + t^{1/(1+hint)} before subdividing, which turns
  /// the endpoint behavior into a bounded one.
  std::optional<double> endpoint_exponent_hint;
};

struct OdeSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double min_step = 1e-13;
  double max_step = 0.25;
};

/// Result of a windowed least-squares line on (ln r, ln |u|).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

/// Plain least-squares line on arbitrary (x, y) pairs.
struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Adaptive integral of f over (a, b); b may be +infinity.  Deterministic:
/// fixed subdivision order, no randomization.  Throws NonConvergence when the
/// subdivision budget runs out and NonFinite when f is non-finite strictly
/// inside the interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

enum class OdeStatus {
  Completed,     ///< reached the requested endpoint
  EventStop,     ///< caller event fired; partial trajectory returned
  StepUnderflow  ///< step size fell below min_step; partial trajectory returned
};

struct OdeResult {
  std::vector<double> t;               ///< accepted step abscissae (includes nodes)
  std::vector<std::vector<double>> y;  ///< states at t
  OdeStatus status = OdeStatus::Completed;
  int event_code = 0;
  double last_t = 0.0;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;
/// Return 0 to continue; any nonzero code stops the integration after the
/// current accepted step and is reported in OdeResult::event_code.
using OdeEvent = std::function<int(double t, const std::vector<double>& y)>;

/// Dormand-Prince 5(4) with PI-free standard step control.  Output nodes are
/// hit exactly by clipping the step, so no dense-output interpolation error
/// enters the reported states.
OdeResult solve_ivp(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1,
                    const OdeSpec& spec = {}, std::span<const double> nodes = {},
                    const OdeEvent& event = nullptr);

/// Brent bracketing root finder; requires f(lo) * f(hi) <= 0 (else NoBracket).
/// Stops when the bracket width is below tol.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

LinFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Least-squares limit of y(x) as x -> 0 under the model
///   y = c0 + sum_j c_j basis_j(x),   basis_j(x) -> 0 as x -> 0,
/// returning c0.  Used to accelerate flux-ratio sequences whose correction
/// terms are known analytically.
double basis_extrapolate(std::span<const double> x, std::span<const double> y,
                         std::span<const std::function<double(double)>> basis);

/// basis_extrapolate with pure power corrections x^{e_j}, e_j > 0.
double power_law_extrapolate(std::span<const double> x, std::span<const double> y,
                             std::span<const double> exponents);

/// Least-squares power-law fit of u against r restricted to r in [r_lo, r_hi].
/// Requires at least 8 samples in the window and u strictly one-signed there.
FitResult loglog_fit(std::span<const double> r, std::span<const double> u,
                     double r_lo, double r_hi);

/// Log-spaced grid from lo to hi with the given resolution, endpoints included.
std::vector<double> geometric_grid(double lo, double hi, int points_per_decade);

}  // namespace pgrad
