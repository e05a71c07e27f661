#pragma once

// Radial test profiles: a scalar function of the distance r with its first
// derivative and endpoint-behavior metadata (local power / log-power
// exponents) used for integrability screening before any quadrature runs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hardylab/geometry.hpp"

namespace hardylab {

// Leading local behavior ~ C t^power log(1/t)^log_power near an endpoint.
struct EndpointPower {
  double power = 0.0;
  double log_power = 0.0;
};

struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double support_lo = 0.0;
  double support_hi = geometry::kInf;
  bool grid_kind = false;
  // behavior as t -> 0+ (meaningful when support_lo == 0)
  EndpointPower lo_value, lo_derivative;
  // decay as t -> +inf (meaningful when support_hi == +inf)
  EndpointPower hi_value, hi_derivative;
};

// C^2 cutoff: 1 on [0, r_on], 0 on [r_off, inf), quintic transition matching
// value and two derivatives at both ends.
struct CutoffSpec {
  double r_on = 0.5;
  double r_off = 1.0;
};

inline double cutoff_value(const CutoffSpec& c, double t) {
  if (!(c.r_off > c.r_on && c.r_on > 0.0)) throw std::invalid_argument("cutoff: need 0 < r_on < r_off");
  if (t <= c.r_on) return 1.0;
  if (t >= c.r_off) return 0.0;
  double x = (t - c.r_on) / (c.r_off - c.r_on);
  return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

inline double cutoff_derivative(const CutoffSpec& c, double t) {
  if (t <= c.r_on || t >= c.r_off) return 0.0;
  double w = c.r_off - c.r_on;
  double x = (t - c.r_on) / w;
  return -30.0 * x * x * (1.0 - x) * (1.0 - x) / w;
}

// Smooth bump supported on [a, d]: rises on [a,b], 1 on [b,c], falls on [c,d].
inline RadialProfile bump_profile(double a, double b, double c, double d) {
  if (!(0.0 < a && a < b && b <= c && c < d)) throw std::invalid_argument("bump: need 0 < a < b <= c < d");
  CutoffSpec up{a, b}, down{c, d};
  RadialProfile u;
  u.support_lo = a;
  u.support_hi = d;
  u.value = [=](double t) {
    if (t <= a || t >= d) return 0.0;
    return (1.0 - cutoff_value(up, t)) * cutoff_value(down, t);
  };
  u.derivative = [=](double t) {
    if (t <= a || t >= d) return 0.0;
    return -cutoff_derivative(up, t) * cutoff_value(down, t) +
           (1.0 - cutoff_value(up, t)) * cutoff_derivative(down, t);
  };
  return u;
}

// Pointwise max{u - iota, 0}; compactifies the support of profiles decaying
// at both ends.  Crossing radii are located by scan + bisection.
inline RadialProfile truncate(const RadialProfile& u, double iota) {
  if (iota < 0.0) throw std::invalid_argument("truncate: iota >= 0 required");
  if (iota == 0.0) return u;
  // scan grid, logarithmic in t, covering the (possibly unbounded) support
  double lo = u.support_lo > 0.0 ? u.support_lo : 1e-14;
  double hi = std::isfinite(u.support_hi) ? u.support_hi : 1e14;
  const int N = 8192;
  double llo = std::log(lo), lhi = std::log(hi);
  double vmax = 0.0;
  int imax = -1;
  std::vector<double> ts(N + 1);
  for (int i = 0; i <= N; ++i) {
    ts[i] = std::exp(llo + (lhi - llo) * i / N);
    double v = u.value(ts[i]);
    if (v > vmax) { vmax = v; imax = i; }
  }
  if (imax < 0 || vmax <= iota) throw std::domain_error("truncate: iota >= max of profile (empty support)");
  auto bisect = [&](double t1, double t2) {
    // u - iota changes sign on [t1, t2]
    for (int it = 0; it < 200; ++it) {
      double tm = 0.5 * (t1 + t2);
      if ((u.value(t1) - iota) * (u.value(tm) - iota) <= 0.0) t2 = tm; else t1 = tm;
      if (t2 - t1 <= 1e-15 * t2) break;
    }
    return 0.5 * (t1 + t2);
  };
  double new_lo = ts[0], new_hi = ts[N];
  for (int i = imax; i >= 1; --i)
    if (u.value(ts[i - 1]) <= iota) { new_lo = bisect(ts[i - 1], ts[i]); break; }
  for (int i = imax; i < N; ++i)
    if (u.value(ts[i + 1]) <= iota) { new_hi = bisect(ts[i], ts[i + 1]); break; }
  RadialProfile v;
  v.support_lo = new_lo;
  v.support_hi = new_hi;
  double a = new_lo, b = new_hi;
  auto base_v = u.value, base_d = u.derivative;
  v.value = [=](double t) {
    if (t <= a || t >= b) return 0.0;
    double w = base_v(t) - iota;
    return w > 0.0 ? w : 0.0;
  };
  v.derivative = [=](double t) {
    if (t <= a || t >= b) return 0.0;
    return base_v(t) > iota ? base_d(t) : 0.0;
  };
  return v;
}

// Piecewise-linear profile from grid samples; derivative from centered
// differences at interior nodes.
inline RadialProfile from_grid(std::vector<double> ts, std::vector<double> vals) {
  if (ts.size() != vals.size() || ts.size() < 3) throw std::invalid_argument("from_grid: need matching arrays, size >= 3");
  size_t N = ts.size();
  std::vector<double> dv(N, 0.0);
  for (size_t i = 1; i + 1 < N; ++i) dv[i] = (vals[i + 1] - vals[i - 1]) / (ts[i + 1] - ts[i - 1]);
  dv[0] = (vals[1] - vals[0]) / (ts[1] - ts[0]);
  dv[N - 1] = (vals[N - 1] - vals[N - 2]) / (ts[N - 1] - ts[N - 2]);
  auto locate = [ts](double t) -> long {
    if (t < ts.front() || t > ts.back()) return -1;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    long i = it - ts.begin() - 1;
    if (i >= (long)ts.size() - 1) i = ts.size() - 2;
    return i;
  };
  RadialProfile u;
  u.grid_kind = true;
  u.support_lo = ts.front();
  u.support_hi = ts.back();
  u.value = [=](double t) {
    long i = locate(t);
    if (i < 0) return 0.0;
    double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return (1.0 - w) * vals[i] + w * vals[i + 1];
  };
  u.derivative = [=](double t) {
    long i = locate(t);
    if (i < 0) return 0.0;
    double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return (1.0 - w) * dv[i] + w * dv[i + 1];
  };
  return u;
}

inline RadialProfile scale_profile(const RadialProfile& u, double c) {
  RadialProfile v = u;
  auto bv = u.value, bd = u.derivative;
  v.value = [=](double t) { return c * bv(t); };
  v.derivative = [=](double t) { return c * bd(t); };
  return v;
}

} // namespace hardylab
