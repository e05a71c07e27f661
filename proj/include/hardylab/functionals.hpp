#pragma once

// Weighted Hardy functionals on radial profiles: the sharp quotient, the
// improved functional with its log^{-2} remainder, the log-weighted quotient,
// and pointwise / integral inequality checks.  All integrals are screened
// against the endpoint-exponent integrability thresholds before quadrature,
// and evaluated in log space so concentrating profiles cannot overflow.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "hardylab/geometry.hpp"
#include "hardylab/profile.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::functionals {

using geometry::kInf;

struct HardyParams {
  double p = 2.0;
  double beta = -2.0;
  int k = 1; // codimension m - n

  double delta() const { return (k + beta) / p; }
  bool flag_p_not_k() const { return p != double(k); }
  bool flag_beta_below_minus_k() const { return beta < -double(k); }
  bool flag_p_plus_beta_above_minus_k() const { return p + beta > -double(k); }

  void validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("HardyParams: p > 1 required");
    if (k < 1) throw std::invalid_argument("HardyParams: k >= 1 required");
  }
};

// |(beta+k)/p|^p, the unattained infimum of the quotient.
inline double sharp_constant(const HardyParams& params) {
  params.validate();
  return std::pow(std::abs((params.beta + params.k) / params.p), params.p);
}

// (p-1)/(2p) |delta|^{p-2}, the log^{-2} remainder coefficient.
inline double remainder_constant(const HardyParams& params) {
  params.validate();
  double d = std::abs(params.delta());
  if (d == 0.0) {
    if (params.p < 2.0)
      throw std::domain_error("remainder_constant: delta = 0 with p < 2 (negative power of zero)");
    return params.p == 2.0 ? (params.p - 1.0) / (2.0 * params.p) : 0.0;
  }
  return (params.p - 1.0) / (2.0 * params.p) * std::pow(d, params.p - 2.0);
}

// ---- weighted p-norm integrals -------------------------------------------

struct WeightSpec {
  double t_power = 0.0;   // extra weight t^{t_power}
  double log_power = 0.0; // extra weight log(D/t)^{log_power}
  double D = 0.0;
  bool use_derivative = false;
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Integrability screening at the endpoints (power/power-log thresholds):
// near 0 the integrand ~ t^e log^lb with e = p a + w + k - 1; convergent iff
// e > -1, or e = -1 with lb < -1.  Near +inf we require strict power decay.
inline std::optional<std::string> screen(const RadialProfile& u, double p,
                                         const WeightSpec& w, int k) {
  if (u.support_lo == 0.0) {
    const EndpointPower& ep = w.use_derivative ? u.lo_derivative : u.lo_value;
    double e = p * ep.power + w.t_power + (k - 1);
    double lb = p * ep.log_power + w.log_power;
    bool ok = (e > -1.0) || (e == -1.0 && lb < -1.0);
    if (!ok)
      return "endpoint exponent " + std::to_string(e) + " (log power " +
             std::to_string(lb) + ") at t=0 is not integrable";
  }
  if (u.support_hi == kInf) {
    const EndpointPower& ep = w.use_derivative ? u.hi_derivative : u.hi_value;
    double e = p * ep.power + w.t_power + (k - 1);
    if (!(e < -1.0))
      return "tail exponent " + std::to_string(e) + " at t=inf is not integrable";
  }
  return std::nullopt;
}

} // namespace detail

// transverse_mass * \int |u or u'|^p t^{t_power} log^{log_power}(D/t) dvol.
inline quadrature::QuadratureResult weighted_pnorm(
    const geometry::ModelSpace& model, const RadialProfile& u, double p,
    const WeightSpec& w, const quadrature::QuadratureSpec& spec,
    const std::function<double(double)>& extra_factor = nullptr) {
  if (auto bad = detail::screen(u, p, w, model.codim()))
    throw std::domain_error("divergent integral: " + *bad);
  double logD = w.log_power != 0.0 ? std::log(w.D) : 0.0;
  int k = model.codim();
  auto logf = [&, logD, k](double t, double y) -> double {
    if (!(t >= 0.0)) return detail::kNegInf;
    double uv = w.use_derivative ? u.derivative(t) : u.value(t);
    if (uv == 0.0 || !std::isfinite(uv)) return detail::kNegInf;
    double s = p * std::log(std::abs(uv)) - (w.t_power + k - 1) * y +
               std::log(model.density_ratio(t));
    if (w.log_power != 0.0) s += w.log_power * std::log(logD + y);
    if (extra_factor) {
      double ex = extra_factor(t);
      if (ex <= 0.0) return detail::kNegInf;
      s += std::log(ex);
    }
    return s;
  };
  double b = std::min(u.support_hi, model.r_max);
  double a = u.support_lo;
  if (!(b > a)) throw std::domain_error("weighted_pnorm: empty support in domain");
  return quadrature::integrate_radial_log(model, logf, spec, a, b);
}

// ---- quotients -------------------------------------------------------------

struct QuotientResult {
  double value = 0.0;
  quadrature::QuadratureResult numerator, denominator;
  operator double() const { return value; }
};

// [ \int |u'|^p r^{p+beta} dvol ] / [ \int |u|^p r^beta dvol ].
inline QuotientResult hardy_quotient(const geometry::ModelSpace& model,
                                     const HardyParams& params,
                                     const RadialProfile& u,
                                     const quadrature::QuadratureSpec& spec) {
  params.validate();
  QuotientResult r;
  r.numerator = weighted_pnorm(model, u, params.p,
                               {params.p + params.beta, 0.0, 0.0, true}, spec);
  r.denominator =
      weighted_pnorm(model, u, params.p, {params.beta, 0.0, 0.0, false}, spec);
  if (r.numerator.divergent || r.denominator.divergent)
    throw std::domain_error("divergent integral in hardy_quotient");
  if (!(r.denominator.value > 0.0))
    throw std::domain_error("zero denominator in hardy_quotient");
  r.value = r.numerator.value / r.denominator.value;
  return r;
}

struct ImprovedResult {
  double i_value = 0.0;             // \int |u'|^p r^{p+beta} - sharp * \int |u|^p r^beta
  double remainder_integral = 0.0;  // \int |u|^p r^beta log^{-2}(D/r) dvol
  double i_error = 0.0;             // summed quadrature error of the two terms
  double remainder_error = 0.0;
};

inline ImprovedResult improved_functional(const geometry::ModelSpace& model,
                                          const HardyParams& params,
                                          const RadialProfile& u, double D,
                                          const quadrature::QuadratureSpec& spec) {
  params.validate();
  double sup_r = std::min(u.support_hi, model.r_max);
  if (!(D >= sup_r))
    throw std::invalid_argument("improved_functional: D >= sup r of the support required");
  ImprovedResult out;
  auto num = weighted_pnorm(model, u, params.p,
                            {params.p + params.beta, 0.0, 0.0, true}, spec);
  auto den =
      weighted_pnorm(model, u, params.p, {params.beta, 0.0, 0.0, false}, spec);
  auto rem = weighted_pnorm(model, u, params.p,
                            {params.beta, -2.0, D, false}, spec);
  if (num.divergent || den.divergent || rem.divergent)
    throw std::domain_error("divergent integral in improved_functional");
  double sharp = sharp_constant(params);
  out.i_value = num.value - sharp * den.value;
  out.i_error = num.error_estimate + sharp * den.error_estimate;
  out.remainder_integral = rem.value;
  out.remainder_error = rem.error_estimate;
  return out;
}

// [ \int log(D/r)^{p+beta} |u'|^p dvol ] / [ \int log(D/r)^beta |u|^p r^{-p} dvol ],
// under the hypotheses: sup r <= D, p >= k > 1,
// log(D/sup r)(k-p) <= (alpha-1)(p-1) < beta+1.
inline QuotientResult log_hardy_quotient(const geometry::ModelSpace& model,
                                         double p, double beta, double alpha,
                                         double D, const RadialProfile& u,
                                         const quadrature::QuadratureSpec& spec) {
  double k = model.codim();
  double sup_r = model.r_max;
  if (!std::isfinite(sup_r))
    throw std::invalid_argument("log_hardy_quotient hypothesis violated: sup r must be finite");
  if (!(sup_r <= D))
    throw std::invalid_argument("log_hardy_quotient hypothesis violated: sup r <= D");
  if (!(p >= k && k > 1.0))
    throw std::invalid_argument("log_hardy_quotient hypothesis violated: p >= k > 1");
  double mid = (alpha - 1.0) * (p - 1.0);
  if (!(std::log(D / sup_r) * (k - p) <= mid))
    throw std::invalid_argument(
        "log_hardy_quotient hypothesis violated: log(D/sup r)(k-p) <= (alpha-1)(p-1)");
  if (!(mid < beta + 1.0))
    throw std::invalid_argument(
        "log_hardy_quotient hypothesis violated: (alpha-1)(p-1) < beta+1");
  QuotientResult r;
  r.numerator = weighted_pnorm(model, u, p, {0.0, p + beta, D, true}, spec);
  r.denominator = weighted_pnorm(model, u, p, {-p, beta, D, false}, spec);
  if (r.numerator.divergent || r.denominator.divergent)
    throw std::domain_error("divergent integral in log_hardy_quotient");
  if (!(r.denominator.value > 0.0))
    throw std::domain_error("zero denominator in log_hardy_quotient");
  r.value = r.numerator.value / r.denominator.value;
  return r;
}

// Sharp constant of the log-weighted quotient.
inline double log_hardy_constant(double p, double beta, double alpha) {
  double theta = (beta + 1.0 - (alpha - 1.0) * (p - 1.0)) / p;
  return std::pow(std::abs(theta), p);
}

// Pointwise convexity inequality (p >= 2), radial reduction:
// all differential quantities are supplied as scalar radial values.
inline bool pointwise_inequality_check(double p, double alpha, double rho,
                                       double drho, double uval, double duval,
                                       double tol = 1e-9) {
  if (!(p >= 2.0)) throw std::invalid_argument("pointwise_inequality_check: p >= 2 required");
  if (!(rho > 0.0) || alpha == 0.0)
    throw std::invalid_argument("pointwise_inequality_check: rho > 0 and alpha != 0 required");
  double gamma = alpha * (p - 1.0) / p;
  double lhs = std::pow(std::abs(duval), p);
  double v = std::pow(rho, -gamma) * uval;
  double dv = std::pow(rho, -gamma) * (duval - gamma * uval * drho / rho);
  double sgn_v = v >= 0.0 ? 1.0 : -1.0;
  double term1 = std::pow(std::abs(gamma), p) * std::pow(std::abs(uval), p) *
                 std::pow(rho, -p) * std::pow(std::abs(drho), p);
  double dvp = p * std::pow(std::abs(v), p - 1.0) * sgn_v * dv;
  double grad_rho_alpha = alpha * std::pow(rho, alpha - 1.0) * drho;
  double term2 = dvp * std::pow(std::abs(grad_rho_alpha), p - 2.0) * grad_rho_alpha;
  double dvhalf = 0.5 * p * std::pow(std::abs(v), 0.5 * p - 1.0) * sgn_v * dv;
  double term3 = dvhalf * dvhalf;
  double rhs = term1 + std::pow((p - 1.0) / p, p - 1.0) * term2 +
               (2.0 / p) * std::pow(std::abs(gamma), p - 2.0) *
                   std::pow(rho, (alpha - 1.0) * (p - 1.0) + 1.0) *
                   std::pow(std::abs(drho), p - 2.0) * term3;
  return lhs >= rhs - tol;
}

// Log-integral inequality: with C = (|s-1|/p)^{p-1},
// C \int |f|^p r^{-k} |r Dr + 1 - k| log^{1-s}(D/r)
//   + \int |f'|^p r^{p-k} log^{p-s}(D/r)
//   >= (|s-1|/p)^p \int |f|^p r^{-k} log^{-s}(D/r),
// all against dvol; the first integrand uses the model's closed-form r Dr.
inline bool log_integral_inequality_check(const geometry::ModelSpace& model,
                                          double p, double s, double D,
                                          const RadialProfile& f,
                                          const quadrature::QuadratureSpec& spec,
                                          double tol = 1e-9) {
  if (!(f.support_lo > 0.0) || !(f.support_hi <= model.r_max))
    throw std::invalid_argument("log_integral_inequality_check: f must be compactly supported in (0, r_max)");
  if (!(D >= model.r_max))
    throw std::invalid_argument("log_integral_inequality_check: D >= r_max required");
  double k = model.codim();
  double C = std::pow(std::abs(s - 1.0) / p, p - 1.0);
  auto mean_curv_factor = [&](double t) {
    return std::abs(t * model.laplacian_r(t) + 1.0 - k);
  };
  auto I1 = weighted_pnorm(model, f, p, {-k, 1.0 - s, D, false}, spec, mean_curv_factor);
  auto I2 = weighted_pnorm(model, f, p, {p - k, p - s, D, true}, spec);
  auto R = weighted_pnorm(model, f, p, {-k, -s, D, false}, spec);
  if (I1.divergent || I2.divergent || R.divergent)
    throw std::domain_error("divergent integral in log_integral_inequality_check");
  double lhs = C * I1.value + I2.value;
  double rhs = std::pow(std::abs(s - 1.0) / p, p) * R.value;
  double slack = tol + C * I1.error_estimate + I2.error_estimate +
                 std::pow(std::abs(s - 1.0) / p, p) * R.error_estimate;
  return lhs >= rhs - slack;
}

} // namespace hardylab::functionals
