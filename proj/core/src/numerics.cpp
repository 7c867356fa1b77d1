#include "pgrad/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pgrad {

namespace {

// ---------------------------------------------------------------------------
// Gauss-Legendre rules.  Nodes and weights are computed once at first use by
// Newton iteration on P_n, which reproduces the textbook tables to machine
// precision without embedding literature constants.
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> x;  // nodes on (-1, 1)
  std::vector<double> w;
};

GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss7() {
  static const GaussRule rule = make_gauss_rule(7);
  return rule;
}

const GaussRule& gauss15() {
  static const GaussRule rule = make_gauss_rule(15);
  return rule;
}

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f,
                  double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const double s = c + h * rule.x[i];
    const double v = f(s);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrate: integrand non-finite at s = " << s;
      throw NonFinite(os.str());
    }
    acc += rule.w[i] * v;
  }
  return acc * h;
}

double adaptive_finite(const std::function<double(double)>& f, double a, double b,
                       const QuadratureSpec& spec) {
  struct Seg {
    double a, b;
  };
  const double total_len = b - a;
  std::vector<Seg> stack{{a, b}};
  double result = 0.0;
  int used = 0;
  while (!stack.empty()) {
    const Seg seg = stack.back();
    stack.pop_back();
    if (++used > spec.max_subdivisions) {
      throw NonConvergence("integrate: subdivision budget exhausted");
    }
    const double coarse = apply_rule(gauss7(), f, seg.a, seg.b);
    const double fine = apply_rule(gauss15(), f, seg.a, seg.b);
    const double err = std::fabs(fine - coarse);
    const double local_tol = spec.abs_tol * ((seg.b - seg.a) / total_len) +
                             spec.rel_tol * std::fabs(fine);
    const double mid = 0.5 * (seg.a + seg.b);
    if (err <= local_tol || mid <= seg.a || mid >= seg.b) {
      result += fine;
    } else {
      // Push the right half first so the left half is processed next:
      // left-to-right deterministic order.
      stack.push_back({mid, seg.b});
      stack.push_back({seg.a, mid});
    }
  }
  return result;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  if (spec.max_subdivisions < 1)
    throw std::invalid_argument("integrate: max_subdivisions must be >= 1");
  if (std::isinf(b)) {
    if (spec.endpoint_exponent_hint)
      throw std::invalid_argument("integrate: endpoint hint unsupported on infinite interval");
    // s = a + t/(1-t) maps (0,1) onto (a, inf).
    auto g = [&f, a](double t) {
      const double om = 1.0 - t;
      return f(a + t / om) / (om * om);
    };
    return adaptive_finite(g, 0.0, 1.0, spec);
  }
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
  if (spec.endpoint_exponent_hint) {
    const double h = *spec.endpoint_exponent_hint;
    if (!(h > -1.0))
      throw std::invalid_argument("integrate: endpoint hint must be > -1 (integrable)");
    if (h != 0.0) {
      const double e = 1.0 / (1.0 + h);
      auto g = [&f, a, h, e](double t) {
        return f(a + std::pow(t, e)) * e * std::pow(t, e - 1.0);
      };
      return adaptive_finite(g, 0.0, std::pow(b - a, 1.0 + h), spec);
    }
  }
  return adaptive_finite(f, a, b, spec);
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

namespace {

struct Dp5Tableau {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
};

bool finite_state(const std::vector<double>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

OdeResult solve_ivp(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1,
                    const OdeSpec& spec, std::span<const double> nodes,
                    const OdeEvent& event) {
  if (t0 == t1) throw std::invalid_argument("solve_ivp: t0 == t1");
  if (!(spec.min_step > 0.0) || !(spec.min_step <= spec.max_step))
    throw std::invalid_argument("solve_ivp: requires 0 < min_step <= max_step");
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
    throw std::invalid_argument("solve_ivp: tolerances must be positive");

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  std::vector<double> sorted_nodes(nodes.begin(), nodes.end());
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  if (dir < 0) std::reverse(sorted_nodes.begin(), sorted_nodes.end());
  size_t next_node = 0;
  // Skip nodes at or behind the start.
  while (next_node < sorted_nodes.size() && dir * (sorted_nodes[next_node] - t0) <= 0.0)
    ++next_node;

  const size_t dim = y0.size();
  using Dp = Dp5Tableau;
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.resize(dim);
  std::vector<double> ytmp(dim), ynew(dim);

  OdeResult out;
  out.t.push_back(t0);
  out.y.push_back(y0);

  double t = t0;
  std::vector<double> y = std::move(y0);
  rhs(t, y, k[0]);

  double h = dir * std::min(spec.max_step, std::max(spec.min_step, 1e-4 * std::fabs(t1 - t0)));
  const int max_steps = 2'000'000;

  for (int step = 0; step < max_steps; ++step) {
    if (dir * (t - t1) >= 0.0) {
      out.status = OdeStatus::Completed;
      out.last_t = t;
      return out;
    }
    bool clipped = false;
    double target = t1;
    if (next_node < sorted_nodes.size() && dir * (sorted_nodes[next_node] - t1) < 0.0)
      target = sorted_nodes[next_node];
    if (dir * (t + h - target) >= 0.0) {
      h = target - t;
      clipped = true;
      if (h == 0.0) {  // already exactly on the target
        if (next_node < sorted_nodes.size() && target == sorted_nodes[next_node]) {
          ++next_node;
          continue;
        }
        out.status = OdeStatus::Completed;
        out.last_t = t;
        return out;
      }
    }

    // Stage sweep.
    for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * Dp::a21 * k[0][i];
    rhs(t + Dp::c2 * h, ytmp, k[1]);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (Dp::a31 * k[0][i] + Dp::a32 * k[1][i]);
    rhs(t + Dp::c3 * h, ytmp, k[2]);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (Dp::a41 * k[0][i] + Dp::a42 * k[1][i] + Dp::a43 * k[2][i]);
    rhs(t + Dp::c4 * h, ytmp, k[3]);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (Dp::a51 * k[0][i] + Dp::a52 * k[1][i] + Dp::a53 * k[2][i] +
                            Dp::a54 * k[3][i]);
    rhs(t + Dp::c5 * h, ytmp, k[4]);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (Dp::a61 * k[0][i] + Dp::a62 * k[1][i] + Dp::a63 * k[2][i] +
                            Dp::a64 * k[3][i] + Dp::a65 * k[4][i]);
    rhs(t + h, ytmp, k[5]);
    for (size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (Dp::b1 * k[0][i] + Dp::b3 * k[2][i] + Dp::b4 * k[3][i] +
                            Dp::b5 * k[4][i] + Dp::b6 * k[5][i]);
    rhs(t + h, ynew, k[6]);

    double err = 0.0;
    bool ok = finite_state(ynew);
    if (ok) {
      for (size_t i = 0; i < dim; ++i) {
        const double e = h * (Dp::e1 * k[0][i] + Dp::e3 * k[2][i] + Dp::e4 * k[3][i] +
                              Dp::e5 * k[4][i] + Dp::e6 * k[5][i] + Dp::e7 * k[6][i]);
        const double sc =
            spec.abs_tol + spec.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / dim);
    }

    if (ok && err <= 1.0) {
      // Land exactly on clipped targets so callers can match nodes bitwise.
      t = clipped ? target : t + h;
      y = ynew;
      k[0] = k[6];  // FSAL
      out.t.push_back(t);
      out.y.push_back(y);
      if (clipped && next_node < sorted_nodes.size() && t == sorted_nodes[next_node])
        ++next_node;
      if (event) {
        const int code = event(t, y);
        if (code != 0) {
          out.status = OdeStatus::EventStop;
          out.event_code = code;
          out.last_t = t;
          return out;
        }
      }
      const double grow = ok ? std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)))
                             : 0.2;
      h = dir * std::min(spec.max_step, std::fabs(h) * grow);
    } else {
      const double shrink = ok ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.1;
      h = dir * std::fabs(h) * std::min(0.9, shrink);
      if (std::fabs(h) < spec.min_step) {
        out.status = OdeStatus::StepUnderflow;
        out.last_t = t;
        return out;
      }
    }
    if (std::fabs(h) < spec.min_step) h = dir * spec.min_step;
  }
  out.status = OdeStatus::StepUnderflow;
  out.last_t = t;
  return out;
}

// ---------------------------------------------------------------------------
// Brent root finding
// ---------------------------------------------------------------------------

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) {
    std::ostringstream os;
    os << "find_root: no sign change on [" << lo << ", " << hi << "]";
    throw NoBracket(os.str());
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 0.5 * tol + 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b);
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double pp, qq, rr;
      const double s = fb / fa;
      if (a == c) {  // secant
        pp = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {  // inverse quadratic
        qq = fa / fc;
        rr = fb / fc;
        pp = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq;
      pp = std::fabs(pp);
      if (2.0 * pp < std::min(3.0 * xm * qq - std::fabs(tol1 * qq), std::fabs(e * qq))) {
        e = d;
        d = pp / qq;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Fits and grids
// ---------------------------------------------------------------------------

LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: need matched n >= 2");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit fit;
  fit.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-300) {
    fit.r_squared = 1.0;  // constant data, perfectly reproduced
  } else {
    double ssres = 0;
    for (size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ssres += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  }
  return fit;
}

double basis_extrapolate(std::span<const double> x, std::span<const double> y,
                         std::span<const std::function<double(double)>> basis) {
  const size_t n = x.size();
  const size_t m = basis.size() + 1;
  if (n != y.size()) throw std::invalid_argument("basis_extrapolate: size mismatch");
  if (n < m) throw std::invalid_argument("basis_extrapolate: need >= #coefficients samples");
  // Normal equations for the design matrix [1, basis_1(x), ..., basis_k(x)].
  std::vector<double> ata(m * m, 0.0), atb(m, 0.0), row(m);
  for (size_t i = 0; i < n; ++i) {
    row[0] = 1.0;
    for (size_t j = 1; j < m; ++j) row[j] = basis[j - 1](x[i]);
    for (size_t a = 0; a < m; ++a) {
      atb[a] += row[a] * y[i];
      for (size_t b = 0; b < m; ++b) ata[a * m + b] += row[a] * row[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t rr = col + 1; rr < m; ++rr)
      if (std::fabs(ata[rr * m + col]) > std::fabs(ata[piv * m + col])) piv = rr;
    if (piv != col) {
      for (size_t cc = 0; cc < m; ++cc) std::swap(ata[col * m + cc], ata[piv * m + cc]);
      std::swap(atb[col], atb[piv]);
    }
    const double d = ata[col * m + col];
    if (std::fabs(d) < 1e-300) throw std::invalid_argument("basis_extrapolate: singular system");
    for (size_t rr = col + 1; rr < m; ++rr) {
      const double f = ata[rr * m + col] / d;
      for (size_t cc = col; cc < m; ++cc) ata[rr * m + cc] -= f * ata[col * m + cc];
      atb[rr] -= f * atb[col];
    }
  }
  std::vector<double> c(m);
  for (size_t rr = m; rr-- > 0;) {
    double s = atb[rr];
    for (size_t cc = rr + 1; cc < m; ++cc) s -= ata[rr * m + cc] * c[cc];
    c[rr] = s / ata[rr * m + rr];
  }
  return c[0];
}

double power_law_extrapolate(std::span<const double> x, std::span<const double> y,
                             std::span<const double> exponents) {
  std::vector<std::function<double(double)>> basis;
  basis.reserve(exponents.size());
  for (double e : exponents)
    basis.push_back([e](double v) { return std::pow(v, e); });
  return basis_extrapolate(x, y, basis);
}

FitResult loglog_fit(std::span<const double> r, std::span<const double> u,
                     double r_lo, double r_hi) {
  if (r.size() != u.size()) throw std::invalid_argument("loglog_fit: size mismatch");
  if (!(r_lo < r_hi) || !(r_lo > 0.0))
    throw std::invalid_argument("loglog_fit: window must satisfy 0 < r_lo < r_hi");
  std::vector<double> lx, ly;
  int sign = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    const int s = (u[i] > 0.0) - (u[i] < 0.0);
    if (s == 0) throw SignChange("loglog_fit: zero sample in window");
    if (sign == 0) sign = s;
    if (s != sign) throw SignChange("loglog_fit: sign change in window");
    lx.push_back(std::log(r[i]));
    ly.push_back(std::log(std::fabs(u[i])));
  }
  if (lx.size() < 8) {
    std::ostringstream os;
    os << "loglog_fit: " << lx.size() << " samples in window, need >= 8";
    throw InsufficientSamples(os.str());
  }
  const LinFit lin = linear_fit(lx, ly);
  return FitResult{lin.slope, lin.intercept, lin.r_squared, r_lo, r_hi};
}

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0) || !(lo < hi)) throw std::invalid_argument("geometric_grid: need 0 < lo < hi");
  if (points_per_decade < 1) throw std::invalid_argument("geometric_grid: points_per_decade >= 1");
  const double decades = std::log10(hi / lo);
  const int m = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<double> g(m);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < m; ++i) g[i] = std::exp(la + (lb - la) * i / (m - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace pgrad
