// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hardylab/extremizers.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/geometry.hpp"
#include "hardylab/jacobi.hpp"
#include "hardylab/profile.hpp"
#include "hardylab/sharpness.hpp"

using namespace hardylab;
using functionals::HardyParams;

static int failures = 0;

static void report(int criterion, const char* what, bool ok) {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
  if (!ok) ++failures;
}

// criteria 1 & 2: sharp-constant ladder with strictness and envelope pinch
static void sharp_sweep_criteria() {
  bool strict = true, limit = true, envelope = true;
  HardyParams params{2.0, -2.0, 1};
  std::vector<geometry::ModelSpace> models{geometry::cylinder_section(1),
                                           geometry::torus_subtorus(2, 1, 3.0)};
  for (const auto& model : models) {
    sharpness::LadderSpec ladder{2, 9};
    auto rep = sharpness::sweep_sharp_constant(model, params, ladder, {}, 0.01);
    strict = strict && rep.strictness_confirmed;
    limit = limit && std::abs(rep.fitted_limit - 0.25) <= 0.01 * 0.25;
    for (size_t i = 0; i < rep.eps.size(); ++i) {
      double env = std::pow((1.0 + rep.eps[i]) / 2.0, 2.0);
      envelope = envelope && rep.quotient[i] < env;
    }
  }
  report(1, "ladder quotients strictly above 1/4 with fitted limit 1/4 +- 1%",
         strict && limit);
  report(2, "every ladder quotient strictly below ((1+eps)/2)^2", envelope);
}

// criterion 3: improved inequality on 200 randomized bumps
static void improved_inequality_criterion() {
  auto model = geometry::cylinder_axis(1);
  HardyParams params{2.0, -2.0, 1};
  auto tc = extremizers::taylor_threshold(params);
  double D = 2.0 * tc.cal_T * geometry::kPi;
  double B = functionals::remainder_constant(params);
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    double hi = geometry::kPi * 0.98;
    double a = hi * (0.02 + 0.3 * unif(rng));
    double b = a + hi * (0.02 + 0.25 * unif(rng));
    double c = b + hi * 0.2 * unif(rng);
    double d = c + hi * 0.02 + (hi - c - hi * 0.02) * unif(rng);
    auto u = scale_profile(bump_profile(a, b, c, d), 0.1 + 5.0 * unif(rng));
    auto r = functionals::improved_functional(model, params, u, D, {});
    if (r.i_value < B * r.remainder_integral - (r.i_error + B * r.remainder_error))
      ++violations;
  }
  report(3, "improved inequality holds on 200 random bumps within certified error",
         violations == 0);
}

// criterion 4: remainder-coefficient extrapolation for two parameter sets
static void remainder_extrapolation_criterion() {
  bool ok = true;
  auto model = geometry::cylinder_axis(1);
  for (auto pr : {std::pair<double, double>{2.0, -2.0}, {3.0, -4.0}}) {
    HardyParams params{pr.first, pr.second, 1};
    auto tc = extremizers::taylor_threshold(params);
    double D = 2.0 * tc.cal_T * model.r_max;
    std::vector<double> thetas;
    for (int j = 12; j <= 15; ++j) thetas.push_back((1.0 + j / 16.0) / params.p);
    sharpness::LadderSpec ladder{4, 12};
    auto rep = sharpness::sweep_remainder(model, params, D, thetas, ladder, {}, 0.05);
    double expected = functionals::remainder_constant(params);
    ok = ok && rep.strictness_confirmed &&
         std::abs(rep.fitted_limit - expected) <= 0.05 * expected;
  }
  report(4, "(theta,eps)-grid extrapolation hits the remainder coefficient within 5%",
         ok);
}

// criterion 5: stronger log weights force the ratio to zero
static void gamma_trichotomy_criterion() {
  auto model = geometry::cylinder_axis(1);
  HardyParams params{2.0, -2.0, 1};
  auto tc = extremizers::taylor_threshold(params);
  double D = 2.0 * tc.cal_T * model.r_max;
  sharpness::LadderSpec ladder{3, 13};
  auto ratios = sharpness::gamma_ratio_sweep(model, params, D, 1.5, ladder, {});
  bool ok = ratios.size() == 11 && ratios.back() <= 0.1 * ratios.front();
  for (size_t i = 1; i < ratios.size(); ++i) ok = ok && ratios[i] < ratios[i - 1] * 1.01;
  report(5, "gamma = 1.5 ratio decays 10x across three eps-decades", ok);
}

// criterion 6: J_alpha slopes and boundedness
static void j_alpha_criterion() {
  auto model = geometry::cylinder_axis(1);
  double p = 2.0, D = 50.0;
  bool ok = true;
  for (double alpha : {0.0, 0.5, 1.0}) {
    std::vector<double> le, lj;
    for (int j = 6; j <= 11; ++j) {
      double eps = std::ldexp(1.0, -j);
      le.push_back(std::log(eps));
      lj.push_back(std::log(extremizers::j_alpha(model, alpha, eps, p, D, {}, {})));
    }
    size_t n = lj.size();
    double slope = (lj[n - 1] - lj[n - 3]) / (le[n - 1] - le[n - 3]);
    ok = ok && std::abs(slope - (-1.0 - alpha)) <= 0.02 * std::abs(1.0 + alpha);
  }
  double prev = -1.0, ratio = 0.0;
  for (int j = 6; j <= 14; ++j) {
    double val = extremizers::j_alpha(model, -2.0, std::ldexp(1.0, -j), p, D, {}, {});
    if (prev > 0.0) ratio = val / prev;
    prev = val;
  }
  ok = ok && std::abs(ratio - 1.0) <= 0.05;
  report(6, "J_alpha slope is -1-alpha within 2%; alpha = -2 stays bounded", ok);
}

// criterion 7: jacobi dominance and newton-chain monotonicity
static void jacobi_criterion() {
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_n(1, 3), pick_k(1, 3), pick_K(0, 2);
  const double Ks[3] = {0.0, 0.5, 1.0};
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = pick_n(rng), k = pick_k(rng);
    int dim = n + k - 1;
    double K = Ks[pick_K(rng)];
    std::vector<double> lambdas(n, 0.0);
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      lambdas[i] = unif(rng);
      sum += lambdas[i];
    }
    if (n > 1) lambdas[n - 1] = -sum;
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = unif(rng);
    double sigma = 0.5 * std::abs(unif(rng));
    jacobi::JacobiSystem sys;
    sys.dim = dim;
    sys.tangent_dim = n;
    sys.curvature = [dim, K, sigma, w](double) {
      return (K * Eigen::MatrixXd::Identity(dim, dim) + sigma * w * w.transpose())
          .eval();
    };
    sys.weingarten = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) sys.weingarten(i, i) = lambdas[i];
    auto sol = jacobi::integrate_jacobi(sys, 3.0, 0.05);
    std::vector<double> env(sol.t.size());
    for (size_t i = 0; i < sol.t.size(); ++i)
      env[i] = jacobi::heintze_karcher_envelope(K, lambdas, k, sol.t[i]);
    size_t scope = jacobi::dominance_scope(sol, env);
    for (size_t i = 0; i < scope; ++i)
      if (sol.det[i] > env[i] + 1e-6) ++violations;
  }
  int newton_violations = 0;
  std::uniform_real_distribution<double> logu(-2.0, 2.0);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 1 + trial % 6;
    std::vector<double> l(n);
    for (auto& x : l) x = std::exp(logu(rng));
    if (!jacobi::newton_chain(l).non_increasing) ++newton_violations;
  }
  report(7, "500 jacobi systems under the envelope; 10^4 newton chains monotone",
         violations == 0 && newton_violations == 0);
}

// criterion 8: closed-form laplacian bounds on a 1000-point grid
static void laplacian_criterion() {
  int violations = 0;
  std::vector<geometry::ModelSpace> minimal{
      geometry::euclidean_point(3), geometry::euclidean_subspace(4, 2),
      geometry::cylinder_section(2), geometry::cylinder_axis(2),
      geometry::torus_subtorus(3, 1, 3.0)};
  for (const auto& model : minimal) {
    double hi = std::isfinite(model.r_max) ? model.r_max : 5.0;
    int k = model.codim();
    for (int i = 1; i <= 1000; ++i) {
      double t = hi * i / 1001.0;
      if (model.laplacian_r(t) > (k - 1) / t + 1e-12) ++violations;
    }
  }
  auto hemi = geometry::hemisphere(3);
  for (int i = 1; i <= 1000; ++i) {
    double t = hemi.r_max * i / 1001.0;
    if (hemi.laplacian_r(t) > 1e-12) ++violations;
  }
  report(8, "laplacian bounds (k-1)/t (hemisphere: 0) on 10^3-point grids",
         violations == 0);
}

// criterion 9: flat regime p < k via descent and ladder
static void flat_regime_criterion() {
  bool ok = true;
  std::vector<geometry::ModelSpace> models{geometry::euclidean_point(3, 1.0),
                                           geometry::torus_subtorus(3, 1, 3.0)};
  for (const auto& model : models) {
    HardyParams params{1.5, -1.5, model.codim()};
    double sharp = functionals::sharp_constant(params);
    auto res = sharpness::rayleigh_descent(model, params, 512, {});
    ok = ok && res.converged && res.inf_estimate >= sharp * (1.0 - 0.03);
    sharpness::LadderSpec ladder{2, 8};
    auto rep = sharpness::sweep_sharp_constant(model, params, ladder, {}, 0.03);
    ok = ok && std::abs(rep.fitted_limit - sharp) <= 0.03 * sharp;
  }
  report(9, "p < k regime: descent infimum and ladder limit within 3%", ok);
}

// criterion 10: log-weighted inequality on the tube with D = sup r
static void log_hardy_criterion() {
  auto model = geometry::torus_subtorus(3, 1, 3.0);
  double D = model.r_max, p = 2.0;
  bool ok = true;
  double best = 1e9;
  double x1 = std::log(700.0);
  for (double x0 : {-2.0, -4.0, -8.0, -16.0}) {
    double X = x1 - x0;
    double rho_lo = std::exp(x0), rho_hi = 700.0;
    RadialProfile u;
    u.support_lo = D * std::exp(-rho_hi);
    u.support_hi = model.r_max;
    u.value = [=](double t) {
      if (t <= 0.0 || t >= D) return 0.0;
      double rho = std::log(D / t);
      if (rho <= rho_lo || rho >= rho_hi) return 0.0;
      return std::sin(geometry::kPi * (std::log(rho) - x0) / X) / std::sqrt(rho);
    };
    u.derivative = [=](double t) {
      if (t <= 0.0 || t >= D) return 0.0;
      double rho = std::log(D / t);
      if (rho <= rho_lo || rho >= rho_hi) return 0.0;
      double ph = geometry::kPi * (std::log(rho) - x0) / X;
      double drho = (-0.5 * std::sin(ph) + std::cos(ph) * geometry::kPi / X) *
                    std::pow(rho, -1.5);
      return -drho / t;
    };
    double q = functionals::log_hardy_quotient(model, p, 0.0, 1.0, D, u, {}).value;
    ok = ok && q >= 0.25 - 1e-9;
    best = std::min(best, q);
  }
  ok = ok && best <= 0.25 * 1.10;
  report(10, "log-weighted quotients >= 1/4 and family within 10% of 1/4", ok);
}

// criterion 11: taylor lower bound for 20 random admissible parameter sets
static void taylor_criterion() {
  std::mt19937_64 rng(161803);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    double p = 1.2 + 2.3 * unif(rng);
    int k = 1 + (int)(3.0 * unif(rng));
    double delta_abs = 0.2 + 1.3 * unif(rng);
    double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
    double beta = sign * delta_abs * p - k; // delta = sign*delta_abs
    HardyParams params{p, beta, k};
    auto tc = extremizers::taylor_threshold(params);
    double d = params.delta();
    double bound = (p - 1.0) / (2.0 * p * d * d);
    for (int i = 0; i <= 1000; ++i) {
      double t = tc.frak_T * i / 1000.0;
      if (extremizers::taylor_f(params, tc.a, t) < 1.0 + bound * t * t - 1e-12)
        ++violations;
    }
  }
  report(11, "taylor lower bound on [0, frak_T] for 20 random parameter sets",
         violations == 0);
}

// criterion 12: byte-identical CSV under a repeated run
static void determinism_criterion() {
  const char* cli = std::getenv("HARDYLAB_CLI");
  if (!cli) {
    report(12, "verify-all determinism (HARDYLAB_CLI not set)", false);
    return;
  }
  namespace fs = std::filesystem;
  auto base = fs::temp_directory_path() / "hardylab-acceptance";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");
  bool ok = true;
  for (const char* dir : {"a", "b"}) {
    std::string cmd = std::string(cli) +
                      " verify-all --model torus --m 2 --n 1 --seed 42 --out " +
                      (base / dir).string() + " > " + (base / dir / "stdout.txt").string();
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  int compared = 0;
  if (ok) {
    for (const auto& entry : fs::directory_iterator(base / "a")) {
      if (entry.path().extension() != ".csv") continue;
      auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
      };
      std::string a = slurp(entry.path());
      std::string b = slurp(base / "b" / entry.path().filename());
      if (a.empty() || a != b) ok = false;
      ++compared;
    }
    ok = ok && compared > 0;
  }
  report(12, "verify-all twice with one seed: exit 0 and byte-identical CSV", ok);
}

int main() {
  sharp_sweep_criteria();
  improved_inequality_criterion();
  remainder_extrapolation_criterion();
  gamma_trichotomy_criterion();
  j_alpha_criterion();
  jacobi_criterion();
  laplacian_criterion();
  flat_regime_criterion();
  log_hardy_criterion();
  taylor_criterion();
  determinism_criterion();
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all criteria passed\n");
  return failures ? 1 : 0;
}
