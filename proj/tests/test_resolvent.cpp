#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "soqd/evolve.hpp"
#include "soqd/features.hpp"
#include "soqd/resolvent.hpp"

using namespace soqd;

namespace {

ModelParams single_mode_params(double omega_e, double omega_j, double d) {
  ModelParams params;
  params.omega_e = omega_e;
  params.modes = {{omega_j, d}};
  return params;
}

// Direct dense oracle: <home|(zI - H)^{-1}|home> by linear solve.
complex resolvent_by_solve(const SubspaceSystem& system, complex z) {
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  Eigen::MatrixXcd shifted = -system.hamiltonian.cast<complex>();
  shifted.diagonal().array() += z;
  const auto home = static_cast<Eigen::Index>(*find_label(system, detail::home_label(system)));
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(dim);
  unit(home) = 1.0;
  const Eigen::VectorXcd column = shifted.partialPivLu().solve(unit);
  return column(home);
}

complex random_off_axis_z(std::mt19937& rng, double centre, double spread) {
  std::uniform_real_distribution<double> re(centre - spread, centre + spread);
  std::uniform_real_distribution<double> im(0.1, 3.0);
  std::bernoulli_distribution sign;
  return {re(rng), sign(rng) ? im(rng) : -im(rng)};
}

}  // namespace

TEST_CASE("zero coupling reduces the diagonal to the free pole") {
  const auto res = single_mode_resolvent(single_mode_params(1.0, 1.2, 0.0), 3);
  CHECK(res.terms.empty());
  const complex z(2.4, 0.7);
  const double level = 1.0 + 3.0 * 1.2;
  CHECK(std::abs(res(z) - 1.0 / (z - level)) < 1e-15);
}

TEST_CASE("single-mode rational diagonal matches the dense solve oracle") {
  std::mt19937 rng(2024);
  for (long n : {0L, 1L, 2L, 7L}) {
    const auto params = single_mode_params(1.0, 1.2, 0.07);
    const auto res = single_mode_resolvent(params, n);
    const auto system = build_single_mode(params, n);
    const double level = 1.0 + static_cast<double>(n) * 1.2;
    for (int trial = 0; trial < 100; ++trial) {
      const complex z = random_off_axis_z(rng, level, 3.0);
      const complex direct = resolvent_by_solve(system, z);
      CHECK(std::abs(res(z) - direct) <= 1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("multi-mode rational diagonal matches the dense solve oracle") {
  std::mt19937 rng(2025);
  ModelParams params;
  params.omega_e = 1.0;
  std::uniform_real_distribution<double> freq(0.4, 1.8);
  std::uniform_real_distribution<double> coupling(0.0, 0.3);
  for (int j = 0; j < 9; ++j) params.modes.push_back({freq(rng), coupling(rng)});

  const auto res = multi_mode_resolvent(params);
  const auto system = build_multi_mode(params);
  for (int trial = 0; trial < 100; ++trial) {
    const complex z = random_off_axis_z(rng, 1.0, 4.0);
    const complex direct = resolvent_by_solve(system, z);
    CHECK(std::abs(res(z) - direct) <= 1e-10 * std::abs(direct));
  }
}

TEST_CASE("single mode at resonance matches multi-mode with one mode") {
  const auto params = single_mode_params(1.0, 1.0, 0.12);
  const auto single = single_mode_resolvent(params, 0);
  const auto multi = multi_mode_resolvent(params);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const complex z = random_off_axis_z(rng, 1.0, 2.0);
    CHECK(std::abs(single(z) - multi(z)) < 1e-15);
  }
}

TEST_CASE("resonant poles sit at E_N -+ d sqrt(4N+2)") {
  for (long n : {0L, 1L, 2L, 7L}) {
    const double d = 0.07;
    const auto res = single_mode_resolvent(single_mode_params(1.0, 1.0, d), n);
    REQUIRE(res.poles_hint.has_value());
    const double omega_n = d * std::sqrt(4.0 * static_cast<double>(n) + 2.0);
    const double level = 1.0 + static_cast<double>(n);
    CHECK((*res.poles_hint)[0] == Catch::Approx(level - omega_n).margin(1e-12));
    CHECK((*res.poles_hint)[1] == Catch::Approx(level + omega_n).margin(1e-12));
    for (double pole : *res.poles_hint) {
      CHECK(std::abs(1.0 / res(complex(pole, 0.0))) < 1e-10);  // denominator vanishes
    }
  }
}

TEST_CASE("Herglotz sign property at off-axis points") {
  ModelParams params;
  params.omega_e = 1.0;
  params.modes = {{0.8, 0.1}, {1.1, 0.2}, {1.5, 0.15}};
  const auto res = multi_mode_resolvent(params);
  CHECK(res(complex(1.0, 0.5)).imag() < 0.0);
  std::mt19937 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const complex z = random_off_axis_z(rng, 1.0, 3.0);
    const complex value = res(z);
    CHECK(value.imag() * z.imag() < 0.0);
  }
}

TEST_CASE("resonant closed form starts at one and rejects detuning") {
  const auto params = single_mode_params(1.0, 1.0, 0.07);
  const auto curve = resonant_closed_form(params, 0, {0.0, 1.0});
  CHECK(curve.factor[0] == 1.0);
  CHECK(curve.method == CurveMethod::ClosedFormResonant);
  const auto detuned = single_mode_params(1.0, 1.0 + 1e-9, 0.07);
  CHECK_THROWS_AS(resonant_closed_form(detuned, 0, {0.0}), std::invalid_argument);
}

TEST_CASE("first zero of the N = 0 resonant factor") {
  const double d = 0.07;
  const auto params = single_mode_params(1.0, 1.0, d);
  const double t_zero = std::numbers::pi / (2.0 * d * std::sqrt(2.0));  // ~15.869

  const auto closed = resonant_closed_form(params, 0, {t_zero});
  CHECK(closed.factor[0] < 1e-25);

  // The evolution factor's first minimum must sit at the same T.
  const auto system = build_single_mode(params, 0);
  const auto curve = decoherence_factor(system, uniform_times(25.0, 5001));
  const auto minimum = first_minimum_time(curve.times, curve.factor);
  REQUIRE(minimum.has_value());
  CHECK(*minimum == Catch::Approx(t_zero).margin(1e-6));
}

TEST_CASE("closed form equals the evolution factor pointwise at resonance") {
  const double d = 0.07;
  const auto params = single_mode_params(1.0, 1.0, d);
  const auto times = uniform_times(200.0, 801);
  for (long n : {0L, 1L, 2L, 7L}) {
    const auto closed = resonant_closed_form(params, n, times);
    const auto evolved = decoherence_factor(build_single_mode(params, n), times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, std::abs(closed.factor[i] - evolved.factor[i]));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("candidate resonant frequencies adjudicated against the evolution") {
  // Exactly one of sqrt(4N+1), sqrt(4N+2) (in d) and (4N+1)d^2 can produce
  // the true factor; the pole algebra picks sqrt(4N+2).
  const double d = 0.07;
  const auto params = single_mode_params(1.0, 1.0, d);
  const auto times = uniform_times(200.0, 512);
  for (long n : {0L, 1L, 2L, 7L}) {
    const auto evolved = decoherence_factor(build_single_mode(params, n), times);
    const double nd = static_cast<double>(n);
    const double candidates[] = {d * std::sqrt(4.0 * nd + 1.0), d * std::sqrt(4.0 * nd + 2.0),
                                 (4.0 * nd + 1.0) * d * d};
    int matches = 0;
    int matched_index = 0;
    for (int c = 0; c < 3; ++c) {
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double candidate = std::cos(candidates[c] * times[i]);
        worst = std::max(worst, std::abs(candidate * candidate - evolved.factor[i]));
      }
      if (worst <= 1e-8) {
        ++matches;
        matched_index = c;
      }
    }
    CHECK(matches == 1);
    CHECK(matched_index == 1);
  }
}

TEST_CASE("Fourier inversion of the free pole stays on the unit circle") {
  const auto res = single_mode_resolvent(single_mode_params(1.0, 1.2, 0.0), 2);
  const auto curve = invert_fourier(res, uniform_times(50.0, 11));
  for (double f : curve.factor) CHECK(f == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("Fourier inversion matches the evolution for the detuned scan points") {
  const auto params = single_mode_params(1.0, 1.2, 0.07);
  for (long n : {0L, 7L}) {
    const auto times = uniform_times(400.0, 21);
    const auto inverted = invert_fourier(single_mode_resolvent(params, n), times);
    const auto evolved = decoherence_factor(build_single_mode(params, n), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(inverted.factor[i] == Catch::Approx(evolved.factor[i]).margin(1e-4));
    }
  }
}

TEST_CASE("Fourier inversion handles a many-pole comb diagonal") {
  ModelParams params;
  params.omega_e = 1.0;
  params.modes = build_comb({1.0, 0.4, 5, 0.17});
  const auto times = uniform_times(40.0, 11);
  const auto inverted = invert_fourier(multi_mode_resolvent(params), times);
  const auto evolved = decoherence_factor(build_multi_mode(params), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(inverted.factor[i] == Catch::Approx(evolved.factor[i]).margin(1e-4));
  }
}

TEST_CASE("single-mode diagonal keeps the Herglotz sign away from resonance") {
  const auto res = single_mode_resolvent(single_mode_params(1.0, 1.4, 0.12), 2);
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const complex z = random_off_axis_z(rng, 3.8, 2.0);
    CHECK(res(z).imag() * z.imag() < 0.0);
  }
}

TEST_CASE("resolvent constructors validate their inputs") {
  ModelParams two_modes;
  two_modes.modes = {{1.0, 0.1}, {1.2, 0.1}};
  CHECK_THROWS_AS(single_mode_resolvent(two_modes, 0), std::invalid_argument);
  CHECK_THROWS_AS(single_mode_resolvent(single_mode_params(1.0, 1.2, 0.1), -1),
                  std::invalid_argument);
  ModelParams empty;
  CHECK_THROWS_AS(multi_mode_resolvent(empty), std::invalid_argument);
}

TEST_CASE("Fourier inversion matches the resonant closed form") {
  const auto params = single_mode_params(1.0, 1.0, 0.07);
  const auto times = uniform_times(120.0, 17);
  const auto inverted = invert_fourier(single_mode_resolvent(params, 1), times);
  const auto closed = resonant_closed_form(params, 1, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(inverted.factor[i] == Catch::Approx(closed.factor[i]).margin(1e-4));
  }
}

TEST_CASE("Fourier inversion stays accurate at long times") {
  // The contour height is capped at 1/T, so the e^{eta T} amplification
  // stays bounded; check against the resonant closed form far out.
  const auto params = single_mode_params(1.0, 1.0, 0.07);
  const std::vector<double> times{2000.0, 5000.0};
  const auto inverted = invert_fourier(single_mode_resolvent(params, 0), times);
  const auto closed = resonant_closed_form(params, 0, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(inverted.factor[i] == Catch::Approx(closed.factor[i]).margin(1e-3));
  }
}

TEST_CASE("Fourier inversion validates its inputs and reports its accuracy") {
  const auto res = single_mode_resolvent(single_mode_params(1.0, 1.2, 0.07), 1);
  CHECK_THROWS_AS(invert_fourier(res, {-1.0}), std::invalid_argument);
  const auto curve = invert_fourier(res, {0.0, 5.0});
  CHECK(curve.params_digest.find("max_quad_error=") != std::string::npos);
}

TEST_CASE("flat-spectrum decay rate is 4 pi rho d^2") {
  const SpectralDensity sd{[](double) { return 10.0; }, [](double) { return 0.02; }, 0.5, 1.5};
  const auto result = wigner_weisskopf(sd, 1.0);
  CHECK(result.gamma_e == Catch::Approx(4.0 * std::numbers::pi * 10.0 * 0.0004).epsilon(1e-14));
  CHECK(result.gamma_e == Catch::Approx(0.05026548245743669).epsilon(1e-12));
}

TEST_CASE("symmetric flat support gives a vanishing shift") {
  const SpectralDensity sd{[](double) { return 10.0; }, [](double) { return 0.02; }, 0.4, 1.6};
  const auto result = wigner_weisskopf(sd, 1.0);
  CHECK(std::abs(result.delta_e) < 1e-8);
}

TEST_CASE("asymmetric flat support matches the analytic principal value") {
  // Flat rho, d on [omega_e - a, omega_e + b]: Delta_e = 2 rho d^2 ln(a/b).
  const double rho = 10.0;
  const double d = 0.02;
  const double a = 0.3;
  const double b = 0.5;
  const SpectralDensity sd{[=](double) { return rho; }, [=](double) { return d; }, 1.0 - a,
                           1.0 + b};
  const auto result = wigner_weisskopf(sd, 1.0);
  const double expected = 2.0 * rho * d * d * std::log(a / b);
  CHECK(result.delta_e == Catch::Approx(expected).margin(1e-6));
}

TEST_CASE("reflecting the spectrum about omega_e flips the shift sign") {
  const double rho = 7.0;
  const double d = 0.03;
  const SpectralDensity right{[=](double) { return rho; }, [=](double) { return d; }, 0.8, 1.7};
  const SpectralDensity left{[=](double) { return rho; }, [=](double) { return d; }, 0.3, 1.2};
  const auto shift_right = wigner_weisskopf(right, 1.0);
  const auto shift_left = wigner_weisskopf(left, 1.0);
  CHECK(shift_right.delta_e == Catch::Approx(-shift_left.delta_e).margin(1e-9));
}

TEST_CASE("wigner_weisskopf rejects omega_e outside the support") {
  const SpectralDensity sd{[](double) { return 1.0; }, [](double) { return 0.1; }, 0.5, 1.5};
  CHECK_THROWS_AS(wigner_weisskopf(sd, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(wigner_weisskopf(sd, 0.5), std::invalid_argument);
}

TEST_CASE("exponential law basics") {
  const auto constant = exponential_law({0.0, 0.0}, uniform_times(10.0, 5));
  for (double f : constant.factor) CHECK(f == 1.0);

  const double gamma = 0.37;
  const auto curve = exponential_law({gamma, 0.0}, {1.0 / gamma});
  CHECK(curve.factor[0] == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(curve.method == CurveMethod::WignerWeisskopf);
  CHECK_THROWS_AS(exponential_law({-0.1, 0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("finite comb evolution follows the exponential law before the revival") {
  // delta = 0.05, d = 0.02: Gamma = 4 pi d^2 / delta ~ 0.1005. The fitted
  // rate over the pre-revival half-window must sit within 5%.
  const double spacing = 0.05;
  const double d = 0.02;
  ModelParams params;
  params.omega_e = 1.0;
  params.modes = build_comb({1.0, 0.4, 17, d});
  const double gamma = 4.0 * std::numbers::pi * d * d / spacing;
  const double window_end = 0.5 * 2.0 * std::numbers::pi / spacing;
  const auto curve = decoherence_factor(build_multi_mode(params), uniform_times(window_end, 2048));
  const auto fit = fit_decay_rate(curve.times, curve.factor, 0.0, window_end, true);
  CHECK(std::abs(fit.rate - gamma) / gamma < 0.05);
}
