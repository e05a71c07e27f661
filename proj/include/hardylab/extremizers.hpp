#pragma once

// Explicit near-extremal families: the two-piece power profile v_eps, its
// truncations, the log-corrected family u_eps, the cut-off weighted integrals
// J_alpha(eps), and the Taylor-expansion constants (a, frak_T, cal_T) that fix
// the admissible tube-scale multiplier for the improved inequality.

#include <cmath>
#include <stdexcept>

#include "hardylab/functionals.hpp"
#include "hardylab/geometry.hpp"
#include "hardylab/profile.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::extremizers {

using functionals::HardyParams;

// ---- v_eps -----------------------------------------------------------------

struct VEpsilonFamily {
  double s = 1.0;       // split radius
  double epsilon = 0.1;
  HardyParams params;

  double c_eps() const { return (std::abs(params.k + params.beta) + epsilon) / params.p; }
  double c_eps_half() const { return (std::abs(params.k + params.beta) + epsilon / 2.0) / params.p; }
};

// (t/s)^{c(eps)} on [0,s], (t/s)^{-c(eps/2)} beyond; value 1 at t = s.
inline RadialProfile v_epsilon_profile(const VEpsilonFamily& fam) {
  if (!(fam.s > 0.0) || !(fam.epsilon > 0.0))
    throw std::invalid_argument("v_epsilon_profile: need s > 0 and epsilon > 0");
  fam.params.validate();
  double s = fam.s, c1 = fam.c_eps(), c2 = fam.c_eps_half();
  RadialProfile u;
  u.support_lo = 0.0;
  u.support_hi = geometry::kInf;
  u.lo_value = {c1, 0.0};
  u.lo_derivative = {c1 - 1.0, 0.0};
  u.hi_value = {-c2, 0.0};
  u.hi_derivative = {-c2 - 1.0, 0.0};
  u.value = [=](double t) {
    if (t <= 0.0) return 0.0;
    return t <= s ? std::pow(t / s, c1) : std::pow(t / s, -c2);
  };
  u.derivative = [=](double t) {
    if (t <= 0.0) return 0.0;
    return t <= s ? (c1 / s) * std::pow(t / s, c1 - 1.0)
                  : (-c2 / s) * std::pow(t / s, -c2 - 1.0);
  };
  return u;
}

// ---- u_eps -----------------------------------------------------------------

struct UEpsilonFamily {
  double epsilon = 0.1;
  double theta = 0.75; // must lie in (1/p, 2/p)
  double D = 10.0;
  HardyParams params;
  CutoffSpec cutoff{0.5, 1.0};

  void validate() const {
    params.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("UEpsilonFamily: epsilon > 0");
    if (!(theta > 1.0 / params.p && theta < 2.0 / params.p))
      throw std::invalid_argument("UEpsilonFamily: theta must lie in (1/p, 2/p)");
    if (!(D > cutoff.r_off))
      throw std::invalid_argument("UEpsilonFamily: D must exceed the cutoff radius");
  }
};

// phi(r) r^{-delta+eps} Psi^{-theta}(r) with Psi = 1/log(D/r); the derivative
// uses the closed form of omega' combined with phi' by the product rule.
inline RadialProfile u_epsilon_profile(const UEpsilonFamily& fam) {
  fam.validate();
  double delta = fam.params.delta(), eps = fam.epsilon, th = fam.theta, D = fam.D;
  CutoffSpec cut = fam.cutoff;
  RadialProfile u;
  u.support_lo = 0.0;
  u.support_hi = cut.r_off;
  u.lo_value = {-delta + eps, th};
  u.lo_derivative = {-delta + eps - 1.0, th};
  u.value = [=](double t) {
    if (t <= 0.0 || t >= cut.r_off) return 0.0;
    double L = std::log(D / t);
    return cutoff_value(cut, t) * std::pow(t, -delta + eps) * std::pow(L, th);
  };
  u.derivative = [=](double t) {
    if (t <= 0.0 || t >= cut.r_off) return 0.0;
    double L = std::log(D / t);
    double omega = std::pow(t, -delta + eps) * std::pow(L, th);
    double domega = std::pow(t, -delta + eps - 1.0) * std::pow(L, th) *
                    (-delta + eps - th / L);
    return cutoff_derivative(cut, t) * omega + cutoff_value(cut, t) * domega;
  };
  return u;
}

// ---- J_alpha and the u_eps norms, evaluated in the log variable ------------
//
// Every u_eps integral reduces to int phi^p e^{-eps p y} (log D + y)^b (...)
// with y = -log t; forming t-powers first would leave the double range for
// small eps, so these are integrated directly in y.

// J_alpha(eps) = \int phi^p r^{-k + eps p} log^alpha(D/r) dvol.
inline quadrature::QuadratureResult j_alpha_result(
    const geometry::ModelSpace& model, double alpha, double epsilon, double p,
    double D, const CutoffSpec& cutoff, const quadrature::QuadratureSpec& spec) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("j_alpha: epsilon > 0 required");
  if (!(D >= model.r_max)) throw std::invalid_argument("j_alpha: D >= r_max required");
  double logD = std::log(D), ep = epsilon * p;
  auto H = [&](double y) {
    double t = std::exp(-y);
    double phi = cutoff_value(cutoff, t);
    if (phi <= 0.0) return 0.0;
    return std::pow(phi, p) * std::exp(-ep * y) * std::pow(logD + y, alpha) *
           model.density_ratio(t);
  };
  auto q = quadrature::integrate_y(H, -std::log(cutoff.r_off), spec);
  q.value *= model.transverse_mass;
  q.error_estimate *= model.transverse_mass;
  return q;
}

inline double j_alpha(const geometry::ModelSpace& model, double alpha,
                      double epsilon, double p, double D,
                      const CutoffSpec& cutoff,
                      const quadrature::QuadratureSpec& spec) {
  return j_alpha_result(model, alpha, epsilon, p, D, cutoff, spec).value;
}

// \int |u_eps|^p r^beta Psi^{gamma}(r) dvol = J_{theta p - gamma}(eps).
inline quadrature::QuadratureResult u_eps_weighted_pnorm(
    const geometry::ModelSpace& model, const UEpsilonFamily& fam, double gamma,
    const quadrature::QuadratureSpec& spec) {
  fam.validate();
  return j_alpha_result(model, fam.theta * fam.params.p - gamma, fam.epsilon,
                        fam.params.p, fam.D, fam.cutoff, spec);
}

// \int |u_eps'|^p r^{p+beta} dvol.
inline quadrature::QuadratureResult u_eps_grad_pnorm(
    const geometry::ModelSpace& model, const UEpsilonFamily& fam,
    const quadrature::QuadratureSpec& spec) {
  fam.validate();
  double p = fam.params.p, delta = fam.params.delta();
  double eps = fam.epsilon, th = fam.theta;
  double logD = std::log(fam.D), ep = eps * p;
  CutoffSpec cut = fam.cutoff;
  auto H = [&](double y) {
    double t = std::exp(-y);
    double phi = cutoff_value(cut, t);
    double dphi = cutoff_derivative(cut, t);
    double L = logD + y;
    double inner = t * dphi + phi * (-delta + eps - th / L);
    if (inner == 0.0) return 0.0;
    return std::exp(-ep * y) * std::pow(L, th * p) *
           std::pow(std::abs(inner), p) * model.density_ratio(t);
  };
  auto q = quadrature::integrate_y(H, -std::log(cut.r_off), spec);
  q.value *= model.transverse_mass;
  q.error_estimate *= model.transverse_mass;
  return q;
}

// ---- Taylor constants -------------------------------------------------------

struct TaylorConstants {
  double a = 0.0;
  double frak_T = 0.0; // largest T with f''' > 0 and the quadratic positive on [0, T]
  double cal_T = 1.0;  // e^{1/frak_T}
};

// f(t) = p q1(t) + (t^2/delta)(b + 2 a t) - (p-1) q1(t)^{p/(p-1)},
// q1(t) = 1 + b t + a t^2, b = (p-1)/(p delta).
inline double taylor_f(const HardyParams& params, double a, double t) {
  double p = params.p, d = params.delta();
  double b = (p - 1.0) / (p * d);
  double q1 = 1.0 + b * t + a * t * t;
  return p * q1 + (t * t / d) * (b + 2.0 * a * t) -
         (p - 1.0) * std::pow(q1, p / (p - 1.0));
}

inline double taylor_q1(const HardyParams& params, double a, double t) {
  double b = (params.p - 1.0) / (params.p * params.delta());
  return 1.0 + b * t + a * t * t;
}

// Closed-form third derivative of f.
inline double taylor_f3(const HardyParams& params, double a, double t) {
  double p = params.p, d = params.delta();
  double b = (p - 1.0) / (p * d);
  double q = p / (p - 1.0);
  double q1 = 1.0 + b * t + a * t * t;
  double dq1 = b + 2.0 * a * t;
  return 12.0 * a / d -
         (p - 1.0) * (q * (q - 1.0) * (q - 2.0) * std::pow(q1, q - 3.0) * dq1 * dq1 * dq1 +
                      6.0 * a * q * (q - 1.0) * std::pow(q1, q - 2.0) * dq1);
}

// Picks a on the admissible side of the pivot (2-p)(p-1)/(6 p^2 delta^2):
// f'''(0) = (6/delta)(a - pivot), so delta < 0 needs a below it (interval
// midpoint for 1 < p < 2, pivot - 1 for p >= 2) and delta > 0 the mirror
// image above it.  Then locates the largest frak_T <= 100 keeping f''' > 0
// and q1 > 0 on [0, frak_T], by scan + bisection with a small safety shrink.
inline TaylorConstants taylor_threshold(const HardyParams& params) {
  params.validate();
  double p = params.p, d = params.delta();
  if (d == 0.0) throw std::domain_error("taylor_threshold: delta != 0 required");
  double bound = (2.0 - p) * (p - 1.0) / (6.0 * p * p * d * d);
  double a;
  if (d < 0.0) a = (p < 2.0) ? 0.5 * bound : bound - 1.0;
  else a = (p < 2.0) ? 1.5 * bound : bound + 1.0;
  const double T_cap = 100.0;
  auto ok = [&](double t) { return taylor_f3(params, a, t) > 0.0 && taylor_q1(params, a, t) > 0.0; };
  if (!ok(0.0))
    throw std::domain_error("taylor_threshold: no positive frak_T at machine resolution");
  const int N = 4096;
  double t_fail = -1.0;
  for (int i = 1; i <= N; ++i) {
    double t = T_cap * i / N;
    if (!ok(t)) {
      double lo = T_cap * (i - 1) / N, hi = t;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ok(mid)) lo = mid; else hi = mid;
      }
      t_fail = lo;
      break;
    }
  }
  TaylorConstants tc;
  tc.a = a;
  tc.frak_T = (t_fail < 0.0) ? T_cap : 0.999 * t_fail;
  if (!(tc.frak_T > 0.0))
    throw std::domain_error("taylor_threshold: no positive frak_T at machine resolution");
  tc.cal_T = std::exp(1.0 / tc.frak_T);
  return tc;
}

} // namespace hardylab::extremizers
