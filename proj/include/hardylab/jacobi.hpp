#pragma once

// Matrix Jacobi equation A'' + R(t) A = 0 with the Fermi initial blocks
// A(0) = diag(I_n, 0_{k-1}), A'(0) = diag(-W, I_{k-1}); det A drives the
// comparison envelopes and the focal-time estimate.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hardylab/geometry.hpp"

namespace hardylab::jacobi {

struct JacobiSystem {
  int dim = 1;         // m - 1
  int tangent_dim = 0; // n (size of the Weingarten block)
  std::function<Eigen::MatrixXd(double)> curvature; // t -> symmetric (m-1)x(m-1)
  Eigen::MatrixXd weingarten;                       // n x n symmetric
};

struct JacobiSolution {
  std::vector<double> t;   // output grid, starting at 0
  std::vector<double> det; // det A on the grid
  bool has_focal = false;
  double focal_time = 0.0; // linear-interpolated first sign change of det
  bool converged = false;  // step-halving settled det(t_end) to 1e-8 relative
  double step_used = 0.0;
};

namespace detail {

inline void rk4_step(const JacobiSystem& sys, double t, double h,
                     Eigen::MatrixXd& A, Eigen::MatrixXd& B) {
  auto f = [&](double tt, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
               Eigen::MatrixXd& da, Eigen::MatrixXd& db) {
    da = b;
    db = -sys.curvature(tt) * a;
  };
  Eigen::MatrixXd k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
  f(t, A, B, k1a, k1b);
  f(t + 0.5 * h, A + 0.5 * h * k1a, B + 0.5 * h * k1b, k2a, k2b);
  f(t + 0.5 * h, A + 0.5 * h * k2a, B + 0.5 * h * k2b, k3a, k3b);
  f(t + h, A + h * k3a, B + h * k3b, k4a, k4b);
  A += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
  B += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
}

inline std::vector<double> run_grid(const JacobiSystem& sys, double t_end,
                                    double out_step, int substeps) {
  int d = sys.dim, n = sys.tangent_dim;
  if (n < 0 || n > d) throw std::invalid_argument("jacobi: need 0 <= tangent_dim <= dim");
  if (sys.weingarten.rows() != n || sys.weingarten.cols() != n)
    throw std::invalid_argument("jacobi: weingarten must be n x n");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  A.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  B.topLeftCorner(n, n) = -sys.weingarten;
  B.bottomRightCorner(d - n, d - n) = Eigen::MatrixXd::Identity(d - n, d - n);
  int steps = std::max(1, (int)std::llround(t_end / out_step));
  std::vector<double> dets;
  dets.reserve(steps + 1);
  dets.push_back(A.determinant());
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    double h = out_step / substeps;
    for (int j = 0; j < substeps; ++j) {
      rk4_step(sys, t, h, A, B);
      t += h;
    }
    dets.push_back(A.determinant());
  }
  return dets;
}

} // namespace detail

// det A on the grid {0, step, 2 step, ...}; inner RK4 substeps are halved
// until det(t_end) settles to 1e-8 relative (non-convergence reported via the
// flag otherwise).
inline JacobiSolution integrate_jacobi(const JacobiSystem& sys, double t_end,
                                       double step) {
  if (!(step > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("integrate_jacobi: need step > 0 and t_end > 0");
  JacobiSolution sol;
  int steps = std::max(1, (int)std::llround(t_end / step));
  double out_step = t_end / steps;
  std::vector<double> prev, cur;
  int substeps = 1;
  for (int halving = 0; halving <= 14; ++halving) {
    cur = detail::run_grid(sys, t_end, out_step, substeps);
    if (!prev.empty()) {
      double a = prev.back(), b = cur.back();
      double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      if (std::abs(a - b) <= 1e-8 * scale) {
        sol.converged = true;
        break;
      }
    }
    prev = cur;
    substeps *= 2;
  }
  sol.step_used = out_step / substeps;
  sol.t.resize(cur.size());
  for (size_t i = 0; i < cur.size(); ++i) sol.t[i] = i * out_step;
  sol.det = cur;
  // first sign change after t=0 (det(0) = 0 when k > 1 by the initial data)
  for (size_t i = 2; i < sol.det.size(); ++i) {
    if (sol.det[i - 1] > 0.0 && sol.det[i] <= 0.0) {
      double d1 = sol.det[i - 1], d2 = sol.det[i];
      sol.has_focal = true;
      sol.focal_time = sol.t[i - 1] + out_step * d1 / (d1 - d2);
      break;
    }
  }
  return sol;
}

// det A_K(t) = s_K(t)^{k-1} prod_a (s_K'(t) - lambda_a s_K(t)).
inline double heintze_karcher_envelope(double K, const std::vector<double>& lambdas,
                                       int k, double t) {
  auto [s, ds] = geometry::s_K(K, t);
  double v = std::pow(s, k - 1);
  for (double lam : lambdas) v *= (ds - lam * s);
  return v;
}

// Number of leading output points on which the comparison bound applies: it
// holds before the first focal time of either solution.  A deep dip of det
// followed by a rebound marks an even-multiplicity focal crossing that the
// sign test misses, and a non-positive envelope marks the comparison
// solution's own focal time.
inline size_t dominance_scope(const JacobiSolution& sol,
                              const std::vector<double>& envelope) {
  double detmax = 0.0;
  for (size_t i = 0; i < sol.t.size(); ++i) {
    if (sol.has_focal && sol.t[i] >= sol.focal_time) return i;
    if (i > 0 && envelope[i] <= 0.0) return i;
    if (i > 0 && sol.det[i] <= 0.0) return i;
    if (i > 1 && sol.det[i] > sol.det[i - 1] && sol.det[i - 1] < 0.03 * detmax)
      return i - 1;
    detmax = std::max(detmax, sol.det[i]);
  }
  return sol.t.size();
}

struct NewtonChain {
  std::vector<double> ratios; // c(n,s) sigma_{s-1}/sigma_s for s = n..1
  bool non_increasing = false;
  bool all_equal = false;
};

// Chain of weighted elementary-symmetric ratios; non-increasing for positive
// entries, constant exactly when all entries coincide.
inline NewtonChain newton_chain(const std::vector<double>& lambdas) {
  int n = (int)lambdas.size();
  if (n < 1) throw std::domain_error("newton_chain: empty input");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::domain_error("newton_chain: entries must be positive");
  // sigma[s] via polynomial expansion of prod (1 + lambda_i x)
  std::vector<double> sigma(n + 1, 0.0);
  sigma[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int s = std::min(i + 1, n); s >= 1; --s)
      sigma[s] += lambdas[i] * sigma[s - 1];
  NewtonChain chain;
  for (int s = n; s >= 1; --s) {
    double c = double(n) * double(n - s + 1) / double(s);
    chain.ratios.push_back(c * sigma[s - 1] / sigma[s]);
  }
  chain.non_increasing = true;
  chain.all_equal = true;
  for (size_t i = 1; i < chain.ratios.size(); ++i) {
    double a = chain.ratios[i - 1], b = chain.ratios[i];
    if (b > a * (1.0 + 1e-12)) chain.non_increasing = false;
    if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) chain.all_equal = false;
  }
  return chain;
}

} // namespace hardylab::jacobi
