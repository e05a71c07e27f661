#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardylab/extremizers.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/geometry.hpp"
#include "hardylab/sharpness.hpp"

using namespace hardylab;
using functionals::HardyParams;
using sharpness::LadderSpec;

TEST_CASE("linear fit") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  auto fit = sharpness::linear_fit(x, y);
  CHECK(fit.intercept == Catch::Approx(1.0));
  CHECK(fit.slope == Catch::Approx(2.0));
}

TEST_CASE("sharpness sweep on the half line") {
  auto model = geometry::cylinder_section(1);
  HardyParams params{2.0, -2.0, 1};
  LadderSpec ladder;
  ladder.j_min = 2;
  ladder.j_max = 8;
  auto rep = sharpness::sweep_sharp_constant(model, params, ladder, {}, 0.02);
  REQUIRE(rep.eps.size() == 7);
  double sharp = functionals::sharp_constant(params);
  for (size_t i = 0; i < rep.eps.size(); ++i) {
    CHECK(rep.quotient[i] > sharp);
    CHECK(rep.quotient[i] < rep.envelope[i]);
  }
  CHECK(rep.strictness_confirmed);
  CHECK(rep.sharp_confirmed);
  CHECK(rep.fitted_limit == Catch::Approx(sharp).epsilon(0.02));
}

TEST_CASE("sharpness sweep on a compact model") {
  auto model = geometry::torus_subtorus(2, 1, 3.0);
  HardyParams params{2.0, -2.0, 1};
  LadderSpec ladder;
  ladder.j_min = 2;
  ladder.j_max = 8;
  auto rep = sharpness::sweep_sharp_constant(model, params, ladder, {}, 0.02);
  CHECK(rep.strictness_confirmed);
  CHECK(rep.sharp_confirmed);
  CHECK(rep.fitted_limit == Catch::Approx(0.25).epsilon(0.02));
}

TEST_CASE("sharpness sweep away from p = 2") {
  auto model = geometry::torus_subtorus(2, 1, 3.0);
  HardyParams params{1.5, -1.5, 1};
  LadderSpec ladder;
  ladder.j_min = 2;
  ladder.j_max = 8;
  auto rep = sharpness::sweep_sharp_constant(model, params, ladder, {}, 0.03);
  double sharp = functionals::sharp_constant(params); // (1/3)^{3/2}
  CHECK(sharp == Catch::Approx(std::pow(1.0 / 3.0, 1.5)));
  CHECK(rep.strictness_confirmed);
  CHECK(rep.fitted_limit == Catch::Approx(sharp).epsilon(0.03));
}

TEST_CASE("remainder sweep recovers the coefficient") {
  auto model = geometry::cylinder_axis(1);
  HardyParams params{2.0, -2.0, 1};
  auto tc = extremizers::taylor_threshold(params);
  double D = 2.0 * tc.cal_T * model.r_max;
  // offsets well above 1/p: R_2 grows like eps^{-(theta p - 1)}, so tight
  // offsets never leave the 1/R_2 transient; the theta-limits are linear in
  // theta and extrapolate back exactly
  std::vector<double> thetas;
  for (int j = 12; j <= 15; ++j) thetas.push_back((1.0 + j / 16.0) / params.p);
  LadderSpec ladder{4, 12};
  auto rep = sharpness::sweep_remainder(model, params, D, thetas, ladder, {}, 0.05);
  double expected = functionals::remainder_constant(params);
  CHECK(rep.strictness_confirmed);
  CHECK(rep.remainder_confirmed);
  CHECK(rep.fitted_limit == Catch::Approx(expected).epsilon(0.05));
}

TEST_CASE("stronger remainder weights are impossible") {
  // gamma > 2: I[u_eps] / R_gamma[u_eps] -> 0, so no positive constant works
  auto model = geometry::cylinder_axis(1);
  HardyParams params{2.0, -2.0, 1};
  auto tc = extremizers::taylor_threshold(params);
  double D = 2.0 * tc.cal_T * model.r_max;
  LadderSpec ladder{3, 13};
  auto ratios = sharpness::gamma_ratio_sweep(model, params, D, 1.5, ladder, {});
  REQUIRE(ratios.size() == 11);
  for (size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] < ratios[i - 1] * 1.01);
  CHECK(ratios.back() < 0.1 * ratios.front()); // decays across three eps-decades
}

TEST_CASE("rayleigh descent on a compact tube") {
  auto model = geometry::torus_subtorus(2, 1, 3.0);
  HardyParams params{2.0, -2.0, 1};
  auto res = sharpness::rayleigh_descent(model, params, 512, {});
  REQUIRE(res.converged);
  double sharp = functionals::sharp_constant(params);
  CHECK(res.inf_estimate >= sharp * (1.0 - 0.03));
  CHECK(res.inf_estimate <= sharp * 1.10); // descent approaches the infimum
}

TEST_CASE("rayleigh descent for p below 2") {
  auto model = geometry::euclidean_point(3, 1.0);
  HardyParams params{1.5, -1.5, 3};
  auto res = sharpness::rayleigh_descent(model, params, 512, {});
  REQUIRE(res.converged);
  double sharp = functionals::sharp_constant(params); // |(3-1.5)/1.5|^{1.5} = 1
  CHECK(sharp == Catch::Approx(1.0));
  CHECK(res.inf_estimate >= sharp * (1.0 - 0.03));
  CHECK(res.inf_estimate <= sharp * 1.10);
}

TEST_CASE("rayleigh estimate is stable under grid refinement") {
  auto model = geometry::torus_subtorus(2, 1, 3.0);
  HardyParams params{2.0, -2.0, 1};
  auto coarse = sharpness::rayleigh_descent(model, params, 256, {});
  auto fine = sharpness::rayleigh_descent(model, params, 512, {});
  CHECK(std::abs(fine.inf_estimate - coarse.inf_estimate) < 0.02);
}
