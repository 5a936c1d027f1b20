#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "soqd/evolve.hpp"
#include "soqd/features.hpp"
#include "soqd/model.hpp"
#include "soqd/subspace.hpp"

namespace soqd {

struct ScanEntry {
  std::string label;
  std::vector<std::pair<std::string, double>> params;
  DecoherenceCurve curve;
  CurveFeatures features;
};

struct ScanResult {
  std::string label;
  Thresholds thresholds;
  std::vector<ScanEntry> entries;
};

namespace scan_defaults {
// Unit scale omega_e = 1 for all canned scans; the single-mode scan then uses
// omega_j = 1.2 (detuning 0.20) and d = 0.07 over N in {0, 1, 2, 7}. The
// multi-mode scan uses equally spaced combs centred on omega_e with fixed
// half-bandwidth 0.4 and coupling 0.17 over 3, 5, 7 and 9 modes.
inline constexpr double kOmegaE = 1.0;
inline constexpr double kFig1Detuning = 0.20;
inline constexpr double kFig1Coupling = 0.07;
inline constexpr long kFig1PhotonNumbers[] = {0, 1, 2, 7};
inline constexpr double kFig2HalfBandwidth = 0.4;
inline constexpr double kFig2Coupling = 0.17;
inline constexpr std::size_t kFig2ModeCounts[] = {3, 5, 7, 9};
}  // namespace scan_defaults

/// Four single-mode curves at fixed detuning, one per reservoir photon
/// number; the dominant oscillation frequency grows with N.
inline ScanResult figure1_scan(const std::vector<double>& times = uniform_times(400.0, 2048)) {
  ScanResult result;
  result.label = "single-mode photon-number scan";

  ModelParams params;
  params.omega_e = scan_defaults::kOmegaE;
  params.modes = {{scan_defaults::kOmegaE + scan_defaults::kFig1Detuning,
                   scan_defaults::kFig1Coupling}};
  for (long n : scan_defaults::kFig1PhotonNumbers) {
    ScanEntry entry;
    entry.label = "N=" + std::to_string(n);
    entry.params = {{"omega_e", params.omega_e},
                    {"omega_j", params.modes[0].omega},
                    {"d", params.modes[0].d},
                    {"N", static_cast<double>(n)}};
    const SubspaceSystem system = build_single_mode(params, n);
    entry.curve = decoherence_factor(system, times);
    entry.features = extract_features(entry.curve, result.thresholds);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

struct Fig2Options {
  std::size_t samples = 16384;
  double horizon_revivals = 1.4;  // scan window length in units of 2*pi/spacing
  Thresholds thresholds{};
  bool on_grid = true;  // true: omega_e coincides with a comb frequency
  std::optional<std::vector<double>> times;  // overrides the per-comb grid
};

/// Four vacuum-reservoir comb curves with growing mode count at fixed
/// bandwidth. Each comb gets its own grid spanning `horizon_revivals`
/// rephasing periods unless explicit times are supplied.
inline ScanResult figure2_scan(const Fig2Options& options = {}) {
  ScanResult result;
  result.label = "multi-mode density scan";
  result.thresholds = options.thresholds;

  for (std::size_t count : scan_defaults::kFig2ModeCounts) {
    CombSpec spec;
    spec.center = scan_defaults::kOmegaE;
    spec.half_bandwidth = scan_defaults::kFig2HalfBandwidth;
    spec.count = count;
    spec.coupling = scan_defaults::kFig2Coupling;
    const double spacing = comb_spacing(spec);
    if (!options.on_grid) spec.center += 0.5 * spacing;

    ModelParams params;
    params.omega_e = scan_defaults::kOmegaE;
    params.modes = build_comb(spec);

    const double rephasing = 2.0 * std::numbers::pi / spacing;
    const std::vector<double> times =
        options.times ? *options.times
                      : uniform_times(options.horizon_revivals * rephasing, options.samples);

    ScanEntry entry;
    entry.label = "M=" + std::to_string(count);
    entry.params = {{"omega_e", params.omega_e},
                    {"count", static_cast<double>(count)},
                    {"half_bandwidth", spec.half_bandwidth},
                    {"d", spec.coupling},
                    {"spacing", spacing},
                    {"rephasing_time", rephasing}};
    const SubspaceSystem system = build_multi_mode(params);
    entry.curve = decoherence_factor(system, times);
    entry.features = extract_features(entry.curve, options.thresholds);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

struct ContinuumOptions {
  double omega_e = 1.0;
  double half_bandwidth = 0.4;
  // Decay-rate anchor 4*pi*0.02^2/0.05: each density gets the coupling
  // d = sqrt(gamma_target*spacing/(4*pi)) that keeps the target rate fixed,
  // so the rate stays far below the bandwidth at every density.
  double gamma_target = 4.0 * std::numbers::pi * 0.02 * 0.02 / 0.05;
  std::vector<double> spacings = {0.4, 0.2, 0.1, 0.05};
  std::size_t samples = 2048;
  double fit_depth = 6.0;  // cap the fit window where -ln(factor) ~ depth
};

struct ContinuumEntry {
  double spacing = 0.0;
  double coupling = 0.0;
  std::size_t count = 0;
  double gamma_ww = 0.0;   // 4*pi*rho*d^2 for this comb
  double window_end = 0.0;
  DecayFit fit;
  double relative_error = 0.0;
  DecoherenceCurve curve;
  std::optional<std::string> error;
};

struct ContinuumResult {
  ContinuumOptions options;
  std::vector<ContinuumEntry> entries;
};

/// Density sweep toward the continuum limit: for each comb spacing, fit
/// -ln(factor) over the pre-revival window [0, min(rephasing/2, depth/Gamma)]
/// and report the fitted rate against 4*pi*rho*d^2.
inline ContinuumResult continuum_check(const ContinuumOptions& options = {}) {
  ContinuumResult result;
  result.options = options;

  for (double spacing : options.spacings) {
    ContinuumEntry entry;
    entry.spacing = spacing;

    CombSpec spec;
    spec.center = options.omega_e;
    spec.half_bandwidth = options.half_bandwidth;
    spec.count = static_cast<std::size_t>(std::lround(2.0 * options.half_bandwidth / spacing)) + 1;
    const double spacing_actual = comb_spacing(spec);
    spec.coupling = std::sqrt(options.gamma_target * spacing_actual / (4.0 * std::numbers::pi));

    entry.spacing = spacing_actual;
    entry.coupling = spec.coupling;
    entry.count = spec.count;
    entry.gamma_ww = 4.0 * std::numbers::pi * spec.coupling * spec.coupling / spacing_actual;

    ModelParams params;
    params.omega_e = options.omega_e;
    params.modes = build_comb(spec);

    const double rephasing = 2.0 * std::numbers::pi / spacing_actual;
    entry.window_end = std::min(0.5 * rephasing, options.fit_depth / entry.gamma_ww);
    const std::vector<double> times = uniform_times(entry.window_end, options.samples);
    entry.curve = decoherence_factor(build_multi_mode(params), times);
    try {
      entry.fit = fit_decay_rate(entry.curve.times, entry.curve.factor, 0.0, entry.window_end,
                                 /*through_origin=*/true);
      entry.relative_error = std::abs(entry.fit.rate - entry.gamma_ww) / entry.gamma_ww;
    } catch (const std::invalid_argument& failure) {
      entry.error = failure.what();
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

struct StimulationCheck {
  DecayFit full;    // two-atom comb system
  DecayFit scaled;  // same comb, couplings divided by sqrt(2)
  double ratio = 0.0;
};

/// Fits the decay rate of a comb system and of the same comb with couplings
/// scaled by 1/sqrt(2) (mimicking the single-excitation rate); the ratio
/// exposes the bosonic-stimulation factor 2.
inline StimulationCheck stimulation_check(double spacing = 0.05, double coupling = 0.02,
                                          double omega_e = 1.0, double half_bandwidth = 0.4,
                                          std::size_t samples = 2048) {
  CombSpec spec;
  spec.center = omega_e;
  spec.half_bandwidth = half_bandwidth;
  spec.count = static_cast<std::size_t>(std::lround(2.0 * half_bandwidth / spacing)) + 1;
  spec.coupling = coupling;

  const double spacing_actual = comb_spacing(spec);
  const double window_end = 0.5 * 2.0 * std::numbers::pi / spacing_actual;
  const std::vector<double> times = uniform_times(window_end, samples);

  StimulationCheck check;
  {
    ModelParams params;
    params.omega_e = omega_e;
    params.modes = build_comb(spec);
    const DecoherenceCurve curve = decoherence_factor(build_multi_mode(params), times);
    check.full = fit_decay_rate(curve.times, curve.factor, 0.0, window_end, true);
  }
  {
    CombSpec scaled = spec;
    scaled.coupling = coupling / std::sqrt(2.0);
    ModelParams params;
    params.omega_e = omega_e;
    params.modes = build_comb(scaled);
    const DecoherenceCurve curve = decoherence_factor(build_multi_mode(params), times);
    check.scaled = fit_decay_rate(curve.times, curve.factor, 0.0, window_end, true);
  }
  check.ratio = check.full.rate / check.scaled.rate;
  return check;
}

}  // namespace soqd
