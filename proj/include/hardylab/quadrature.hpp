#pragma once

// Singular weighted radial quadrature.  Endpoint singularities of power /
// power-log type at t=0 are removed by the substitution y = -log t, which
// turns them into exponentially decaying integrands on a half line; those are
// swept with geometrically widening panels, each panel integrated by adaptive
// 15-point Gauss bisection.  Semi-infinite upper ranges use y = +log t the
// same way.  Divergence is detected from the measured decay rate of the
// transformed integrand together with a runaway-sum threshold.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "hardylab/geometry.hpp"

namespace hardylab::quadrature {

using geometry::kInf;
using geometry::kPi;

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_refinements = 30;      // bisection depth per panel
  double endpoint_grading = 2.0; // initial panel width in the log variable
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  bool divergent = false;
  long nodes_used = 0;
};

namespace detail {

struct GaussRule {
  std::array<double, 15> x{}, w{};
};

// 15-point Gauss-Legendre rule on [-1,1], nodes by Newton on P_15.
inline const GaussRule& gl15() {
  static const GaussRule rule = [] {
    GaussRule g{};
    const int n = 15;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.x[i] = x;
      g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

template <class F>
double gauss15(const F& f, double a, double b, long& nodes) {
  const GaussRule& g = gl15();
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += g.w[i] * f(c + h * g.x[i]);
  nodes += 15;
  return s * h;
}

template <class F>
double adaptive(const F& f, double a, double b, double tol, double& err,
                long& nodes, int depth, int max_depth) {
  double q1 = gauss15(f, a, b, nodes);
  double m = 0.5 * (a + b);
  double q2 = gauss15(f, a, m, nodes) + gauss15(f, m, b, nodes);
  double d = std::abs(q2 - q1);
  if (d <= tol || depth >= max_depth ||
      (b - a) <= 4e-16 * (std::abs(a) + std::abs(b))) {
    err += d;
    return q2;
  }
  return adaptive(f, a, m, 0.5 * tol, err, nodes, depth + 1, max_depth) +
         adaptive(f, m, b, 0.5 * tol, err, nodes, depth + 1, max_depth);
}

} // namespace detail

// Integral of H over [y0, y_end); for the half-line case (y_end = +inf) H
// must eventually decay.  Panels of doubling width, per-panel adaptive Gauss.
// On the half line, divergence is flagged when the measured decay rate stays
// <= 0 while the integrand is still significant, or when the running sum
// exceeds 1e12 x the first panel; a finite range is a proper integral and is
// simply swept to its end.
template <class F>
QuadratureResult integrate_y(const F& H, double y0, const QuadratureSpec& spec,
                             double y_end = kInf) {
  QuadratureResult r;
  if (!(y_end > y0)) throw std::domain_error("integrate_y: need y_end > y0");
  const bool half_line = !std::isfinite(y_end);
  double acc = 0.0, err = 0.0;
  long nodes = 0;
  double w = spec.endpoint_grading > 0.0 ? spec.endpoint_grading : 2.0;
  double y = y0;
  double first_mag = -1.0;
  double h_ref = -1.0; // first significant integrand magnitude
  int flat_count = 0;
  bool stopped = false;
  const int max_panels = 120;
  for (int i = 0; i < max_panels; ++i) {
    double wcur = half_line ? w : std::min(w, y_end - y);
    if (!(wcur > 0.0)) {
      stopped = true;
      break;
    }
    double scale = std::max(spec.abs_tol, spec.rel_tol * std::abs(acc));
    double tol_i = scale / 16.0;
    double perr = 0.0;
    double P = detail::adaptive(H, y, y + wcur, tol_i, perr, nodes, 0, spec.max_refinements);
    if (std::isnan(P)) {
      r.value = acc;
      r.error_estimate = kInf;
      r.nodes_used = nodes;
      return r;
    }
    acc += P;
    err += perr;
    if (i == 0) first_mag = std::abs(P);
    if (!half_line && y + wcur >= y_end * (1.0 - 1e-15) - 1e-300) {
      stopped = true;
      break;
    }
    if (half_line) {
      double h1 = std::abs(H(y)), h2 = std::abs(H(y + wcur));
      nodes += 2;
      scale = std::max(spec.abs_tol, spec.rel_tol * std::abs(acc));
      // rate < 0: decaying; rate ~ 0 persistently: log-divergent tail; a
      // genuinely growing integrand is left to the magnitude guards (benign
      // transients -- cutoff ramps, slow log factors -- stay bounded, real
      // power divergences blow past them within a few doubling panels)
      double rate = (h1 > 0.0 && h2 > 0.0) ? std::log(h2 / h1) / wcur : 0.0;
      bool significant = h2 * wcur > scale;
      if (h_ref < 0.0 && std::max(h1, h2) > 0.0)
        h_ref = std::max({h1, h2, spec.abs_tol});
      if (h2 > 0.0 && std::abs(rate) <= 1e-10 && significant) {
        if (++flat_count >= 3) {
          r.divergent = true;
          break;
        }
      } else {
        flat_count = 0;
      }
      if ((h_ref > 0.0 && h2 > 1e10 * h_ref) ||
          std::abs(acc) > 1e12 * std::max(first_mag, spec.abs_tol)) {
        r.divergent = true;
        break;
      }
      if (std::abs(P) <= tol_i && h2 * 2.0 * wcur <= tol_i) {
        err += std::abs(P) + h2 * 2.0 * wcur; // projected tail allowance
        stopped = true;
        break;
      }
    }
    y += wcur;
    if (w < 1e7) w *= 2.0;
  }
  r.value = acc;
  r.error_estimate = err;
  r.nodes_used = nodes;
  r.converged = stopped && !r.divergent &&
                err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(acc));
  return r;
}

namespace detail {

template <class F>
QuadratureResult integrate_finite(const F& f, double a, double b,
                                  const QuadratureSpec& spec) {
  QuadratureResult r;
  long nodes = 0;
  double rough = gauss15(f, a, b, nodes);
  double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough)) / 4.0;
  double err = 0.0;
  double v = adaptive(f, a, b, tol, err, nodes, 0, spec.max_refinements);
  r.value = v;
  r.error_estimate = err;
  r.nodes_used = nodes;
  r.divergent = !std::isfinite(v);
  r.converged = !r.divergent &&
                err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(v));
  return r;
}

inline void accumulate(QuadratureResult& total, const QuadratureResult& piece) {
  total.value += piece.value;
  total.error_estimate += piece.error_estimate;
  total.nodes_used += piece.nodes_used;
  total.divergent = total.divergent || piece.divergent;
  total.converged = total.converged && piece.converged;
}

} // namespace detail

// General 1-D integral over (a,b), 0 <= a < b <= +inf, with an admissible
// power/power-log singularity allowed at a = 0 and power decay at b = +inf.
template <class F>
QuadratureResult integrate_function(const F& f, double a, double b,
                                    const QuadratureSpec& spec) {
  if (!(a >= 0.0) || !(b > a)) throw std::domain_error("integrate_function: need 0 <= a < b");
  QuadratureResult total;
  total.converged = true;
  auto lower = [&f](double y) { // t = e^{-y}
    double t = std::exp(-y);
    return t > 0.0 ? f(t) * t : 0.0;
  };
  auto upper = [&f](double y) { // t = e^{+y}
    double t = std::exp(y);
    return f(t) * t;
  };
  if (a == 0.0) {
    if (std::isfinite(b)) {
      detail::accumulate(total, integrate_y(lower, -std::log(b), spec));
    } else {
      detail::accumulate(total, integrate_y(lower, 0.0, spec)); // (0,1]
      detail::accumulate(total, integrate_y(upper, 0.0, spec)); // [1,inf)
    }
  } else if (std::isfinite(b)) {
    detail::accumulate(total, detail::integrate_finite(f, a, b, spec));
  } else {
    detail::accumulate(total, integrate_y(upper, std::log(a), spec));
  }
  if (total.divergent) total.converged = false;
  total.converged = total.converged &&
                    total.error_estimate <=
                        std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value));
  return total;
}

// transverse_mass * \int_a^b F(t) density(t) dt  (volume reduction formula).
template <class F>
QuadratureResult integrate_radial(const geometry::ModelSpace& model, const F& f,
                                  const QuadratureSpec& spec, double a = 0.0,
                                  double b = kInf) {
  if (b > model.r_max) b = model.r_max;
  if (!(a >= 0.0) || !(b > a)) throw std::domain_error("integrate_radial: bad interval");
  auto g = [&](double t) { return t > 0.0 ? f(t) * model.density(t) : 0.0; };
  QuadratureResult r = integrate_function(g, a, b, spec);
  r.value *= model.transverse_mass;
  r.error_estimate *= model.transverse_mass;
  return r;
}

// Same reduction for a nonnegative integrand supplied as its logarithm:
// logf(t, y) with y = -log t must return log(F(t) * density(t)), using y for
// any t-power factors so that extreme exponents never overflow.  Needed for
// the concentrating extremizer integrands whose raw factors leave the double
// range long before the product does.
template <class LogF>
QuadratureResult integrate_radial_log(const geometry::ModelSpace& model,
                                      const LogF& logf,
                                      const QuadratureSpec& spec, double a = 0.0,
                                      double b = kInf) {
  if (b > model.r_max) b = model.r_max;
  if (!(a >= 0.0) || !(b > a)) throw std::domain_error("integrate_radial_log: bad interval");
  QuadratureResult total;
  total.converged = true;
  // Both substitutions stay in log space throughout, so integrands whose
  // magnitude only balances after combining powers never overflow.
  auto lower = [&](double y) { return std::exp(logf(std::exp(-y), y) - y); };
  auto upper = [&](double y) {
    double t = std::exp(y);
    return std::exp(logf(t, -y) + y);
  };
  if (std::isfinite(b)) {
    double y_hi = a > 0.0 ? -std::log(a) : kInf;
    detail::accumulate(total, integrate_y(lower, -std::log(b), spec, y_hi));
  } else {
    double split = std::max(a, 1.0);
    if (a < split) {
      double y_hi = a > 0.0 ? -std::log(a) : kInf;
      detail::accumulate(total, integrate_y(lower, -std::log(split), spec, y_hi));
    }
    detail::accumulate(total, integrate_y(upper, std::log(split), spec));
  }
  if (total.divergent) total.converged = false;
  total.converged = total.converged &&
                    total.error_estimate <=
                        std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value));
  total.value *= model.transverse_mass;
  total.error_estimate *= model.transverse_mass;
  return total;
}

struct HTableEntry {
  bool defined = false;
  double value = 0.0;
  double error = 0.0;
  std::string refusal;
};

// H1(s1,s2) = int_0^L log(D/t)^{s1} t^{s2} dt  and
// H2(l,s1,s2) = int_L^l log(D/t)^{s1} t^{s2} dt, each evaluated only when the
// defining integrability condition holds, with a refusal record otherwise.
inline std::pair<HTableEntry, HTableEntry> h_tables(double D, double L,
                                                    double s1, double s2,
                                                    double l,
                                                    QuadratureSpec spec = {}) {
  if (!(L > 0.0 && L < D)) throw std::invalid_argument("h_tables: need 0 < L < D");
  if (!(l > L && l <= D)) throw std::invalid_argument("h_tables: need L < l <= D");
  HTableEntry h1, h2;
  double logD = std::log(D);
  if (s2 > -1.0) {
    // y-space form: exp(-(s2+1) y) (log D + y)^{s1}
    auto H = [&](double y) { return std::exp(-(s2 + 1.0) * y) * std::pow(logD + y, s1); };
    QuadratureResult q = integrate_y(H, -std::log(L), spec);
    h1.defined = true;
    h1.value = q.value;
    h1.error = q.error_estimate;
  } else if (s2 == -1.0 && s1 < -1.0) {
    // exact: int_{log(D/L)}^inf y^{s1} dy
    h1.defined = true;
    h1.value = std::pow(std::log(D / L), s1 + 1.0) / (-1.0 - s1);
    h1.error = 0.0;
  } else {
    h1.refusal = "H1 undefined: requires s2 > -1 or (s1 < -1 and s2 = -1)";
  }
  if (l < D) {
    auto f = [&](double t) { return std::pow(std::log(D / t), s1) * std::pow(t, s2); };
    QuadratureResult q = detail::integrate_finite(f, L, l, spec);
    h2.defined = true;
    h2.value = q.value;
    h2.error = q.error_estimate;
  } else if (s1 > -1.0) {
    // u = log(D/t): D^{s2+1} int_0^{log(D/L)} u^{s1} e^{-(s2+1)u} du
    double U = std::log(D / L);
    auto f = [&](double u) { return std::pow(u, s1) * std::exp(-(s2 + 1.0) * u); };
    QuadratureResult q = integrate_function(f, 0.0, U, spec);
    h2.defined = true;
    h2.value = std::pow(D, s2 + 1.0) * q.value;
    h2.error = std::pow(D, s2 + 1.0) * q.error_estimate;
  } else {
    h2.refusal = "H2 undefined: requires l < D or s1 > -1";
  }
  return {h1, h2};
}

} // namespace hardylab::quadrature
