#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "soqd/correlate.hpp"

using namespace soqd;

namespace {

std::vector<double> grid_64(double t_max) {
  std::vector<double> values(64);
  for (std::size_t i = 0; i < 64; ++i) values[i] = t_max * static_cast<double>(i) / 63.0;
  return values;
}

}  // namespace

TEST_CASE("pure |1g,1e> gives the two-particle interference fringe") {
  const TwoAtomState state{0.0, 1.0, 0.0};
  const double omega_e = 1.0;
  const auto ts = grid_64(12.0);
  for (double t : ts) {
    for (double tp : ts) {
      const double expected = std::pow(std::cos(0.5 * omega_e * (t - tp)), 2);
      CHECK(std::abs(g2_first_principles(state, {}, omega_e, t, tp) - expected) < 1e-12);
    }
  }
}

TEST_CASE("doubly occupied states give the flat half") {
  const auto ts = grid_64(9.0);
  for (const TwoAtomState& state : {TwoAtomState{1.0, 0.0, 0.0}, TwoAtomState{0.0, 0.0, 1.0}}) {
    for (double t : ts) {
      for (double tp : ts) {
        CHECK(std::abs(g2_first_principles(state, {}, 1.0, t, tp) - 0.5) < 1e-12);
      }
    }
  }
}

TEST_CASE("equal times give (1 + p_mid)/2") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double w0 = unit(rng), w1 = unit(rng), w2 = unit(rng);
    const double sum = w0 + w1 + w2;
    const TwoAtomState state{w0 / sum, w1 / sum, w2 / sum};
    const double t = 10.0 * unit(rng);
    CHECK(g2_first_principles(state, {}, 1.3, t, t) ==
          Catch::Approx(0.5 * (1.0 + state.p_mid)).margin(1e-12));
  }
}

TEST_CASE("compact form equals the first-principles trace for balanced measurement") {
  std::mt19937 rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto ts = grid_64(15.0);
  for (int trial = 0; trial < 8; ++trial) {
    double w0 = unit(rng), w1 = unit(rng), w2 = unit(rng);
    const double sum = w0 + w1 + w2;
    const TwoAtomState state{w0 / sum, w1 / sum, w2 / sum};
    const double omega_e = 0.5 + 2.0 * unit(rng);
    for (double t : ts) {
      for (double tp : ts) {
        CHECK(std::abs(g2_first_principles(state, {}, omega_e, t, tp) -
                       g2_compact(state.p_mid, omega_e, t, tp)) < 1e-12);
      }
    }
  }
}

TEST_CASE("compact form endpoints") {
  CHECK(g2_compact(1.0, 1.0, 3.3, 3.3) == 1.0);
  for (double dt : {0.0, 0.7, 2.9}) {
    CHECK(g2_compact(0.0, 1.0, dt, 0.0) == 0.5);  // no interference at p_mid = 0
  }
  CHECK_THROWS_AS(g2_compact(1.2, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(g2_compact(-0.2, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("unbalanced measurement keeps the fringe when c1 c2 != 0") {
  // For |1g,1e>: G = 4 |c1 c2|^2 cos^2(omega_e (t - t')/2).
  MeasurementCoeffs coeffs;
  coeffs.c1 = {0.8, 0.0};
  coeffs.c2 = {0.0, 0.6};
  const TwoAtomState state{0.0, 1.0, 0.0};
  const double omega_e = 1.1;
  const double scale = 4.0 * std::norm(coeffs.c1) * std::norm(coeffs.c2);
  for (double dt : {0.0, 0.4, 1.9, 5.2}) {
    const double expected = scale * std::pow(std::cos(0.5 * omega_e * dt), 2);
    CHECK(g2_first_principles(state, coeffs, omega_e, dt, 0.0) ==
          Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("correlation depends only on the time difference") {
  const TwoAtomState state{0.2, 0.5, 0.3};
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> time(-20.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = time(rng);
    const double tp = time(rng);
    const double shift = time(rng);
    CHECK(g2_first_principles(state, {}, 1.0, t, tp) ==
          Catch::Approx(g2_first_principles(state, {}, 1.0, t + shift, tp + shift))
              .margin(1e-12));
  }
}

TEST_CASE("balanced correlation stays within [0, 1]") {
  std::mt19937 rng(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> time(-30.0, 30.0);
  for (int trial = 0; trial < 300; ++trial) {
    double w0 = unit(rng), w1 = unit(rng), w2 = unit(rng);
    const double sum = w0 + w1 + w2;
    const TwoAtomState state{w0 / sum, w1 / sum, w2 / sum};
    const double g = g2_first_principles(state, {}, 1.0, time(rng), time(rng));
    CHECK(g >= -1e-15);
    CHECK(g <= 1.0 + 1e-15);
  }
}

TEST_CASE("grid evaluation matches the scalar operation") {
  const TwoAtomState state{0.1, 0.6, 0.3};
  const auto grid = g2_grid(state, {}, 1.0, {0.5}, {1.5});
  CHECK(grid.g.rows() == 1);
  CHECK(grid.g(0, 0) == g2_first_principles(state, {}, 1.0, 0.5, 1.5));
  CHECK_THROWS_AS(g2_grid(state, {}, 1.0, {}, {0.0}), std::invalid_argument);
}

TEST_CASE("symmetric grids give symmetric matrices") {
  const TwoAtomState state{0.25, 0.5, 0.25};
  const auto ts = grid_64(11.0);
  const auto grid = g2_grid(state, {}, 1.0, ts, ts);
  CHECK((grid.g - grid.g.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fringe visibility over one period equals p_mid") {
  std::mt19937 rng(35);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double w0 = unit(rng), w1 = unit(rng), w2 = unit(rng);
    const double sum = w0 + w1 + w2;
    const TwoAtomState state{w0 / sum, w1 / sum, w2 / sum};
    const double omega_e = 1.0;
    // Scan one fringe period in t - t'.
    double lo = 2.0, hi = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double dt = 2.0 * std::numbers::pi * static_cast<double>(i) / 2000.0;
      const double g = g2_first_principles(state, {}, omega_e, dt, 0.0);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    CHECK((hi - lo) / (hi + lo) == Catch::Approx(state.p_mid).margin(1e-9));
  }
}

TEST_CASE("state validation rejects unnormalized weights") {
  CHECK_THROWS_AS(validate_state(TwoAtomState{0.5, 0.6, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(validate_state(TwoAtomState{-0.1, 0.9, 0.2}), std::invalid_argument);
}
