#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardylab/geometry.hpp"

using namespace hardylab;
using geometry::kPi;

// series oracle for sinh/cosh, independent of libm
static std::pair<double, double> sinh_cosh_series(double x) {
  double s = 0.0, c = 0.0, term = 1.0;
  for (int n = 0; n < 40; ++n) {
    if (n % 2 == 0) c += term; else s += term;
    term *= x / (n + 1);
  }
  return {s, c};
}

TEST_CASE("closed-form densities") {
  CHECK(geometry::torus_subtorus(2, 1).density(0.5) == Catch::Approx(1.0));
  CHECK(geometry::cylinder_axis(1).density(0.3) == Catch::Approx(1.0));
  CHECK(geometry::hemisphere(2).density(kPi / 3.0) == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(geometry::euclidean_point(3).density(0.5) == Catch::Approx(0.25));
  CHECK(geometry::euclidean_subspace(4, 2).density(2.0) == Catch::Approx(2.0));
  CHECK(geometry::cylinder_section(2).density(1.7) == Catch::Approx(1.0));
  CHECK(geometry::cylinder_axis(3).density(1.0) == Catch::Approx(std::pow(std::sin(1.0), 2)));
}

TEST_CASE("radial laplacians") {
  CHECK(geometry::cylinder_section(2).laplacian_r(1.0) == 0.0);
  CHECK(geometry::hemisphere(2).laplacian_r(kPi / 4.0) == Catch::Approx(-1.0));
  CHECK(geometry::torus_subtorus(3, 1).laplacian_r(0.25) == Catch::Approx(4.0));
  CHECK(geometry::cylinder_axis(2).laplacian_r(0.7) == Catch::Approx(1.0 / std::tan(0.7)));
}

TEST_CASE("log-derivative of density equals laplacian (finite differences)") {
  auto models = {geometry::euclidean_point(3), geometry::euclidean_subspace(4, 2),
                 geometry::cylinder_section(2), geometry::cylinder_axis(2),
                 geometry::hemisphere(3),      geometry::torus_subtorus(3, 1)};
  for (const auto& model : models) {
    double hi = std::isfinite(model.r_max) ? model.r_max : 4.0;
    for (int i = 1; i <= 20; ++i) {
      double t = 0.05 + (hi - 0.1) * i / 21.0;
      double h = 1e-5;
      double fd = (std::log(model.density(t + h)) - std::log(model.density(t - h))) / (2.0 * h);
      CHECK(fd == Catch::Approx(model.laplacian_r(t)).margin(1e-6));
    }
  }
}

TEST_CASE("density ratio tends to 1 near the submanifold") {
  auto models = {geometry::euclidean_point(3), geometry::cylinder_axis(3),
                 geometry::hemisphere(3), geometry::torus_subtorus(4, 2)};
  for (const auto& model : models) {
    double t = 1e-4;
    int k = model.codim();
    CHECK(model.density(t) / std::pow(t, k - 1) == Catch::Approx(1.0).margin(1e-6));
    CHECK(model.density_ratio(t) == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("minimal-model laplacian bound and hemisphere sign") {
  auto minimal = {geometry::euclidean_point(3), geometry::euclidean_subspace(4, 2),
                  geometry::cylinder_section(2), geometry::cylinder_axis(2),
                  geometry::torus_subtorus(3, 1)};
  for (const auto& model : minimal) {
    double hi = std::isfinite(model.r_max) ? model.r_max : 5.0;
    int k = model.codim();
    for (int i = 1; i <= 1000; ++i) {
      double t = hi * i / 1001.0;
      CHECK(model.laplacian_r(t) <= (k - 1) / t + 1e-12);
    }
  }
  auto hemi = geometry::hemisphere(3);
  for (int i = 1; i <= 1000; ++i) {
    double t = hemi.r_max * i / 1001.0;
    CHECK(hemi.laplacian_r(t) <= 1e-12);
  }
}

TEST_CASE("domain errors outside (0, r_max)") {
  auto model = geometry::cylinder_axis(2);
  CHECK_THROWS_AS(model.density(-0.1), std::domain_error);
  CHECK_THROWS_AS(model.density(0.0), std::domain_error);
  CHECK_THROWS_AS(model.density(kPi + 0.1), std::domain_error);
  CHECK_THROWS_AS(model.laplacian_r(4.0), std::domain_error);
}

TEST_CASE("s_K closed forms") {
  auto [v0, d0] = geometry::s_K(0.0, 2.5);
  CHECK(v0 == 2.5);
  CHECK(d0 == 1.0);
  auto [v1, d1] = geometry::s_K(1.0, kPi / 2.0);
  CHECK(v1 == Catch::Approx(1.0));
  CHECK(d1 == Catch::Approx(0.0).margin(1e-15));
  auto [vm, dm] = geometry::s_K(-1.0, 1.0);
  auto [so, co] = sinh_cosh_series(1.0);
  CHECK(vm == Catch::Approx(so).epsilon(1e-12));
  CHECK(dm == Catch::Approx(co).epsilon(1e-12));
  // general K < 0 via the series oracle
  auto [v2, d2] = geometry::s_K(-2.0, 0.7);
  auto [s2, c2] = sinh_cosh_series(std::sqrt(2.0) * 0.7);
  CHECK(v2 == Catch::Approx(s2 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d2 == Catch::Approx(c2).epsilon(1e-12));
}

TEST_CASE("radial density record is consistent") {
  auto model = geometry::torus_subtorus(3, 1);
  auto rd = geometry::radial_density(model);
  CHECK(rd.density(0.5) == model.density(0.5));
  CHECK(rd.log_derivative(0.5) == model.laplacian_r(0.5));
}
