#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "soqd/model.hpp"

using namespace soqd;

TEST_CASE("comb frequencies are equally spaced with uniform coupling") {
  const auto modes = build_comb({1.0, 0.4, 5, 0.17});
  REQUIRE(modes.size() == 5);
  const double expected[] = {0.6, 0.8, 1.0, 1.2, 1.4};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(modes[i].omega == Catch::Approx(expected[i]).margin(1e-15));
    CHECK(modes[i].d == 0.17);
  }
}

TEST_CASE("degenerate comb is a single mode at the centre") {
  const auto modes = build_comb({1.0, 0.4, 1, 0.17});
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].omega == 1.0);
  CHECK(modes[0].d == 0.17);
}

TEST_CASE("comb spacing and implied density") {
  const CombSpec spec{1.0, 0.4, 9, 0.02};
  CHECK(comb_spacing(spec) == Catch::Approx(0.1).epsilon(1e-15));
  CHECK(1.0 / comb_spacing(spec) == Catch::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("comb rejects bad input") {
  CHECK_THROWS_AS(build_comb({1.0, 0.4, 0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_comb({1.0, -0.4, 3, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_comb({1.0, 0.0, 2, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_comb({std::nan(""), 0.4, 3, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_comb({1.0, 0.4, 3, -0.1}), std::invalid_argument);
}

TEST_CASE("comb frequencies are symmetric about the centre and increasing") {
  std::mt19937 rng(20260810);
  std::uniform_real_distribution<double> centre(0.2, 5.0);
  std::uniform_real_distribution<double> width(1e-3, 2.0);
  std::uniform_int_distribution<std::size_t> count(2, 64);
  for (int trial = 0; trial < 200; ++trial) {
    CombSpec spec{centre(rng), width(rng), count(rng), 0.1};
    const auto modes = build_comb(spec);
    REQUIRE(modes.size() == spec.count);
    for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
      CHECK(modes[i].omega < modes[i + 1].omega);
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double mirror = modes[modes.size() - 1 - i].omega;
      CHECK(std::abs((modes[i].omega - spec.center) + (mirror - spec.center)) < 1e-12);
    }
  }
}

TEST_CASE("default measurement is the balanced pair") {
  ModelParams params;
  CHECK(params.measurement.norm_squared() == Catch::Approx(1.0).margin(1e-15));
  CHECK(validate(params).ok());
}

TEST_CASE("validation flags every violated invariant") {
  ModelParams params;
  params.omega_e = 0.0;
  params.measurement.c1 = 1.0;
  params.measurement.c2 = 1.0;
  params.modes = {{1.0, -0.2}};
  const auto report = validate(params);
  REQUIRE_FALSE(report.ok());
  CHECK(report.errors.size() == 3);
  CHECK_THROWS_AS(validated(params), ValidationError);
}

TEST_CASE("duplicate mode frequencies warn but do not fail") {
  ModelParams params;
  params.modes = {{1.0, 0.1}, {1.0, 0.2}};
  const auto report = validate(params);
  CHECK(report.ok());
  REQUIRE(report.warnings.size() == 1);
}

TEST_CASE("free-evolution params with no modes validate") {
  ModelParams params;
  CHECK(validate(params).ok());
}
