// Command-line front end: config ingestion, subcommand dispatch and
// deterministic CSV/JSON emission. Data CSVs are byte-stable across runs;
// wall times live only in the manifests.
//
// Exit codes: 0 success, 2 configuration/validation failure, 3 numeric
// failure. Error paths emit one machine-readable JSON object on stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soqd/soqd.hpp"

namespace fs = std::filesystem;
using namespace soqd;

namespace {

struct GlobalOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;  // reserved; all computations are deterministic
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit_error(const std::string& kind, const std::string& message,
                const std::vector<std::string>& details = {}) {
  nlohmann::json error;
  error["error"] = kind;
  error["message"] = message;
  if (!details.empty()) error["details"] = details;
  std::cerr << error.dump() << '\n';
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

fs::path prepare_out_dir(const GlobalOptions& global) {
  fs::path dir(global.out_dir);
  fs::create_directories(dir);
  return dir;
}

// Flags override config-file values; a flag wins whenever it was set on the
// command line, otherwise the config (when present) wins, otherwise the
// built-in default stands.
struct SingleModeArgs {
  std::string config_path;
  double omega_e = 1.0;
  double omega_j = 1.2;
  double d = 0.07;
  long photon_number = 0;
  double t_max = 400.0;
  std::size_t samples = 2048;
  bool closed_form = false;
  bool resolvent_inversion = false;
  bool oracle = false;
  bool weights = false;
};

struct MultiModeArgs {
  std::string config_path;
  double omega_e = 1.0;
  double center = 1.0;
  double half_bandwidth = 0.4;
  std::size_t count = 9;
  double coupling = 0.17;
  double t_max = 80.0;
  std::size_t samples = 2048;
  bool resolvent_inversion = false;
  bool oracle = false;
  bool weights = false;
};

nlohmann::json params_to_json(const ModelParams& params) {
  nlohmann::json json;
  json["omega_e"] = params.omega_e;
  json["mode_count"] = params.modes.size();
  auto modes = nlohmann::json::array();
  for (const auto& mode : params.modes) modes.push_back({{"omega", mode.omega}, {"d", mode.d}});
  json["modes"] = modes;
  return json;
}

int cmd_single_mode(const GlobalOptions& global, const SingleModeArgs& args,
                    const CLI::App& command) {
  Stopwatch stopwatch;
  ModelParams params;
  std::string digest;
  if (!args.config_path.empty()) {
    auto loaded = load_config(args.config_path, /*reservoir_required=*/true);
    params = std::move(loaded.params);
    digest = loaded.digest;
    if (params.modes.size() != 1) {
      throw ConfigError("single-mode requires exactly one reservoir mode in the config");
    }
  } else {
    params.modes.resize(1);
  }
  if (args.config_path.empty() || command.count("--omega-e")) params.omega_e = args.omega_e;
  if (args.config_path.empty() || command.count("--omega-j")) params.modes[0].omega = args.omega_j;
  if (args.config_path.empty() || command.count("--d")) params.modes[0].d = args.d;
  {
    const auto report = validate(params);
    if (!report.ok()) throw ConfigError("invalid parameters: " + report.joined());
  }

  const fs::path dir = prepare_out_dir(global);
  const auto times = uniform_times(args.t_max, args.samples);
  const SubspaceSystem system = build_single_mode(params, args.photon_number);
  const DecoherenceCurve evolution = decoherence_factor(system, times);

  RunManifest manifest;
  manifest.command = "single-mode";
  manifest.config_digest = digest;
  manifest.parameters = params_to_json(params);
  manifest.parameters["N"] = args.photon_number;
  manifest.parameters["t_max"] = args.t_max;
  manifest.parameters["samples"] = args.samples;

  const fs::path main_csv = dir / "single_mode.csv";
  if (args.weights) {
    std::vector<ReducedDensityWeights> weights;
    weights.reserve(times.size());
    for (double t : times) weights.push_back(reduced_density(system, t));
    write_curve_with_weights_csv(main_csv, evolution, weights);
  } else {
    write_curve_csv(main_csv, evolution);
  }
  manifest.outputs.push_back(main_csv.string());

  if (args.closed_form) {
    const auto closed = resonant_closed_form(params, args.photon_number, times);
    const fs::path path = dir / "single_mode_closed_form.csv";
    write_curve_csv(path, closed);
    manifest.outputs.push_back(path.string());
    manifest.results["closed_form_max_deviation"] =
        max_abs_difference(closed.factor, evolution.factor);
  }
  if (args.resolvent_inversion) {
    const auto inverted =
        invert_fourier(single_mode_resolvent(params, args.photon_number), times);
    const fs::path path = dir / "single_mode_resolvent.csv";
    write_curve_csv(path, inverted);
    manifest.outputs.push_back(path.string());
    manifest.results["resolvent_max_deviation"] =
        max_abs_difference(inverted.factor, evolution.factor);
    manifest.results["resolvent_digest"] = inverted.params_digest;
  }
  if (args.oracle) {
    const OccupationState initial{1, 1, {static_cast<int>(args.photon_number)}};
    const auto oracle = oracle_factor(params, initial, times);
    const fs::path path = dir / "single_mode_oracle.csv";
    write_curve_csv(path, oracle);
    manifest.outputs.push_back(path.string());
    manifest.results["oracle_max_deviation"] =
        max_abs_difference(oracle.factor, evolution.factor);
  }

  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / "single_mode_manifest.json", manifest);
  return 0;
}

int cmd_multi_mode(const GlobalOptions& global, const MultiModeArgs& args,
                   const CLI::App& command) {
  Stopwatch stopwatch;
  ModelParams params;
  std::string digest;
  if (!args.config_path.empty()) {
    auto loaded = load_config(args.config_path, /*reservoir_required=*/true);
    params = std::move(loaded.params);
    digest = loaded.digest;
    if (command.count("--omega-e")) params.omega_e = args.omega_e;
  } else {
    params.omega_e = args.omega_e;
    CombSpec spec{args.center, args.half_bandwidth, args.count, args.coupling};
    params.modes = build_comb(spec);
    const auto report = validate(params);
    if (!report.ok()) throw ConfigError("invalid parameters: " + report.joined());
  }

  const fs::path dir = prepare_out_dir(global);
  const auto times = uniform_times(args.t_max, args.samples);
  const SubspaceSystem system = build_multi_mode(params);
  const DecoherenceCurve evolution = decoherence_factor(system, times);

  RunManifest manifest;
  manifest.command = "multi-mode";
  manifest.config_digest = digest;
  manifest.parameters = params_to_json(params);
  manifest.parameters["t_max"] = args.t_max;
  manifest.parameters["samples"] = args.samples;

  const fs::path main_csv = dir / "multi_mode.csv";
  if (args.weights) {
    std::vector<ReducedDensityWeights> weights;
    weights.reserve(times.size());
    for (double t : times) weights.push_back(reduced_density(system, t));
    write_curve_with_weights_csv(main_csv, evolution, weights);
  } else {
    write_curve_csv(main_csv, evolution);
  }
  manifest.outputs.push_back(main_csv.string());

  if (args.resolvent_inversion) {
    const auto inverted = invert_fourier(multi_mode_resolvent(params), times);
    const fs::path path = dir / "multi_mode_resolvent.csv";
    write_curve_csv(path, inverted);
    manifest.outputs.push_back(path.string());
    manifest.results["resolvent_max_deviation"] =
        max_abs_difference(inverted.factor, evolution.factor);
  }
  if (args.oracle) {
    const OccupationState initial{1, 1, std::vector<int>(params.modes.size(), 0)};
    const auto oracle = oracle_factor(params, initial, times);
    const fs::path path = dir / "multi_mode_oracle.csv";
    write_curve_csv(path, oracle);
    manifest.outputs.push_back(path.string());
    manifest.results["oracle_max_deviation"] =
        max_abs_difference(oracle.factor, evolution.factor);
  }

  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / "multi_mode_manifest.json", manifest);
  return 0;
}

struct ContinuumArgs {
  double rho = 10.0;
  double d = 0.02;
  double omega_e = 1.0;
  double support_lo = 0.5;
  double support_hi = 1.5;
  double t_max = 100.0;
  std::size_t samples = 2048;
  std::size_t comb_count = 0;  // 0: no comb comparison
};

int cmd_continuum(const GlobalOptions& global, const ContinuumArgs& args) {
  Stopwatch stopwatch;
  if (!(args.support_lo < args.omega_e && args.omega_e < args.support_hi)) {
    throw ConfigError("omega_e must be interior to the support interval");
  }
  if (args.rho < 0.0 || args.samples == 0 || args.t_max <= 0.0) {
    throw ConfigError("continuum requires rho >= 0, samples >= 1 and t_max > 0");
  }

  const fs::path dir = prepare_out_dir(global);
  const SpectralDensity sd{[rho = args.rho](double) { return rho; },
                           [d = args.d](double) { return d; }, args.support_lo, args.support_hi};
  const auto ww = wigner_weisskopf(sd, args.omega_e);
  const auto times = uniform_times(args.t_max, args.samples);
  const auto law = exponential_law(ww, times);

  RunManifest manifest;
  manifest.command = "continuum";
  manifest.parameters = {{"rho", args.rho},
                         {"d", args.d},
                         {"omega_e", args.omega_e},
                         {"support_lo", args.support_lo},
                         {"support_hi", args.support_hi},
                         {"t_max", args.t_max},
                         {"samples", args.samples}};
  manifest.results["gamma_e"] = ww.gamma_e;
  manifest.results["delta_e"] = ww.delta_e;

  const fs::path law_csv = dir / "continuum_exponential.csv";
  write_curve_csv(law_csv, law);
  manifest.outputs.push_back(law_csv.string());

  if (args.comb_count > 1) {
    CombSpec spec{args.omega_e, 0.5 * (args.support_hi - args.support_lo), args.comb_count,
                  args.d};
    spec.center = 0.5 * (args.support_lo + args.support_hi);
    ModelParams params;
    params.omega_e = args.omega_e;
    params.modes = build_comb(spec);
    const double spacing = comb_spacing(spec);
    const double window_end = std::min(args.t_max, 0.5 * 2.0 * std::numbers::pi / spacing);
    const auto comb_times = uniform_times(window_end, args.samples);
    const auto curve = decoherence_factor(build_multi_mode(params), comb_times);
    const fs::path comb_csv = dir / "continuum_comb.csv";
    write_curve_csv(comb_csv, curve);
    manifest.outputs.push_back(comb_csv.string());

    const double gamma_comb = 4.0 * std::numbers::pi * args.d * args.d / spacing;
    const auto fit = fit_decay_rate(curve.times, curve.factor, 0.0, window_end, true);
    manifest.results["comb"] = {{"count", args.comb_count},
                                {"spacing", spacing},
                                {"gamma_ww", gamma_comb},
                                {"fitted_rate", fit.rate},
                                {"relative_error", std::abs(fit.rate - gamma_comb) / gamma_comb},
                                {"r_squared", fit.r_squared}};
  }

  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / "continuum_manifest.json", manifest);
  return 0;
}

struct CorrelationArgs {
  std::string config_path;
  double p_upper = 0.0;
  double p_mid = 1.0;
  double p_lower = 0.0;
  bool from_model = false;
  double omega_e = 1.0;
  double omega_j = 1.2;
  double d = 0.07;
  long photon_number = 0;
  double interaction_time = 0.0;
  double t_max = 12.566370614359172;  // two fringe periods at omega_e = 1
  std::size_t grid = 64;
};

int cmd_correlation(const GlobalOptions& global, const CorrelationArgs& args,
                    const CLI::App& command) {
  Stopwatch stopwatch;
  ModelParams params;
  std::string digest;
  if (!args.config_path.empty()) {
    auto loaded = load_config(args.config_path, args.from_model);
    params = std::move(loaded.params);
    digest = loaded.digest;
  } else {
    params.omega_e = args.omega_e;
  }
  if (command.count("--omega-e")) params.omega_e = args.omega_e;

  TwoAtomState state{args.p_upper, args.p_mid, args.p_lower};
  if (args.from_model) {
    if (args.config_path.empty()) {
      params.modes = {{args.omega_j, args.d}};
    }
    if (params.modes.size() != 1) {
      throw ConfigError("correlation --from-model requires exactly one reservoir mode");
    }
    const auto system = build_single_mode(params, args.photon_number);
    const auto weights = reduced_density(system, args.interaction_time);
    state = {weights.p_upper, weights.p_mid, weights.p_lower};
  }
  try {
    validate_state(state);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }

  const fs::path dir = prepare_out_dir(global);
  const auto axis = uniform_times(args.t_max, args.grid);
  const auto grid = g2_grid(state, params.measurement, params.omega_e, axis, axis);

  const fs::path grid_csv = dir / "correlation_grid.csv";
  write_grid_csv(grid_csv, grid);

  RunManifest manifest;
  manifest.command = "correlation";
  manifest.config_digest = digest;
  manifest.parameters = {{"omega_e", params.omega_e},
                         {"p_upper", state.p_upper},
                         {"p_mid", state.p_mid},
                         {"p_lower", state.p_lower},
                         {"t_max", args.t_max},
                         {"grid", args.grid}};
  if (args.from_model) {
    manifest.parameters["N"] = args.photon_number;
    manifest.parameters["interaction_time"] = args.interaction_time;
  }
  manifest.outputs.push_back(grid_csv.string());

  // Balanced measurement: the compact form must agree with the exact trace.
  const bool balanced =
      std::abs(std::norm(params.measurement.c1) - 0.5) < 1e-12 &&
      std::abs(std::norm(params.measurement.c2) - 0.5) < 1e-12;
  if (balanced) {
    double worst = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
      for (std::size_t j = 0; j < axis.size(); ++j) {
        const double compact = g2_compact(state.p_mid, params.omega_e, axis[i], axis[j]);
        worst = std::max(worst, std::abs(compact - grid.g(static_cast<Eigen::Index>(i),
                                                          static_cast<Eigen::Index>(j))));
      }
    }
    manifest.results["compact_max_deviation"] = worst;
  }

  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / "correlation_manifest.json", manifest);
  return 0;
}

struct ReproduceArgs {
  std::string figure;
  std::size_t samples = 0;  // 0: per-figure default
  double collapse_threshold = 0.1;
  double revival_threshold = 0.5;
  bool off_grid = false;
};

std::string scan_entry_csv_name(const std::string& prefix, const ScanEntry& entry) {
  std::string label = entry.label;
  for (char& c : label) {
    if (c == '=' || c == ' ') c = '_';
  }
  return prefix + "_" + label + ".csv";
}

int cmd_reproduce(const GlobalOptions& global, const ReproduceArgs& args) {
  Stopwatch stopwatch;
  const fs::path dir = prepare_out_dir(global);

  RunManifest manifest;
  manifest.command = "reproduce " + args.figure;

  auto emit_scan = [&](const ScanResult& scan, const std::string& prefix) {
    manifest.parameters["thresholds"] = {{"collapse", scan.thresholds.collapse},
                                         {"revival", scan.thresholds.revival}};
    auto entries = nlohmann::json::array();
    for (const auto& entry : scan.entries) {
      const fs::path csv = dir / scan_entry_csv_name(prefix, entry);
      write_curve_csv(csv, entry.curve);
      manifest.outputs.push_back(csv.string());
      nlohmann::json record;
      record["label"] = entry.label;
      for (const auto& [key, value] : entry.params) record["params"][key] = value;
      record["features"] = features_to_json(entry.features);
      record["csv"] = csv.filename().string();
      entries.push_back(record);
    }
    manifest.results["curves"] = entries;
  };

  if (args.figure == "fig1") {
    const auto times = uniform_times(400.0, args.samples ? args.samples : 2048);
    emit_scan(figure1_scan(times), "fig1");
  } else if (args.figure == "fig2") {
    Fig2Options options;
    options.thresholds = {args.collapse_threshold, args.revival_threshold};
    options.on_grid = !args.off_grid;
    if (args.samples) options.samples = args.samples;
    emit_scan(figure2_scan(options), "fig2");
  } else if (args.figure == "continuum") {
    ContinuumOptions options;
    if (args.samples) options.samples = args.samples;
    const auto sweep = continuum_check(options);
    manifest.parameters["gamma_target"] = options.gamma_target;
    auto entries = nlohmann::json::array();
    for (const auto& entry : sweep.entries) {
      char name[64];
      std::snprintf(name, sizeof(name), "continuum_delta_%g.csv", entry.spacing);
      const fs::path csv = dir / name;
      write_curve_csv(csv, entry.curve);
      manifest.outputs.push_back(csv.string());
      nlohmann::json record = {{"spacing", entry.spacing},
                               {"coupling", entry.coupling},
                               {"count", entry.count},
                               {"gamma_ww", entry.gamma_ww},
                               {"window_end", entry.window_end},
                               {"csv", csv.filename().string()}};
      if (entry.error) {
        record["error"] = *entry.error;
      } else {
        record["fitted_rate"] = entry.fit.rate;
        record["relative_error"] = entry.relative_error;
        record["r_squared"] = entry.fit.r_squared;
      }
      entries.push_back(record);
    }
    manifest.results["sweep"] = entries;
  } else {
    throw ConfigError("unknown figure '" + args.figure + "' (expected fig1, fig2 or continuum)");
  }

  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / (args.figure + "_manifest.json"), manifest);
  return 0;
}

struct DumpArgs {
  std::string config_path;
  double omega_e = 1.0;
  double omega_j = 1.2;
  double d = 0.07;
  long photon_number = -1;  // >= 0: single-mode subspace, else multi-mode
  std::size_t comb_count = 0;
  double half_bandwidth = 0.4;
  double coupling = 0.17;
};

int cmd_dump_hamiltonian(const GlobalOptions& global, const DumpArgs& args) {
  Stopwatch stopwatch;
  ModelParams params;
  std::string digest;
  if (!args.config_path.empty()) {
    auto loaded = load_config(args.config_path, /*reservoir_required=*/true);
    params = std::move(loaded.params);
    digest = loaded.digest;
  } else if (args.comb_count > 0) {
    params.omega_e = args.omega_e;
    params.modes = build_comb({args.omega_e, args.half_bandwidth, args.comb_count, args.coupling});
  } else {
    params.omega_e = args.omega_e;
    params.modes = {{args.omega_j, args.d}};
  }

  const SubspaceSystem system = args.photon_number >= 0
                                    ? build_single_mode(params, args.photon_number)
                                    : build_multi_mode(params);

  const fs::path dir = prepare_out_dir(global);
  const fs::path csv = dir / "hamiltonian.csv";
  write_matrix_csv(csv, system.hamiltonian);

  RunManifest manifest;
  manifest.command = "dump-hamiltonian";
  manifest.config_digest = digest;
  manifest.parameters = params_to_json(params);
  manifest.parameters["dimension"] = system.dimension();
  auto labels = nlohmann::json::array();
  for (const auto& label : system.basis) labels.push_back(to_string(label));
  manifest.parameters["basis"] = labels;
  manifest.outputs.push_back(csv.string());
  manifest.wall_ms = stopwatch.ms();
  write_manifest(dir / "hamiltonian_manifest.json", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"second-order decoherence toolkit for a two-mode boson system"};
  app.require_subcommand(1);

  GlobalOptions global;
  if (const char* env = std::getenv("SOQD_OUT_DIR")) global.out_dir = env;
  app.add_option("--out-dir", global.out_dir, "output directory (env SOQD_OUT_DIR)");
  app.add_option("--seed", global.seed, "reserved; all computations are deterministic");

  SingleModeArgs single;
  auto* single_cmd = app.add_subcommand("single-mode", "factor of a one-mode Fock reservoir");
  single_cmd->add_option("--config", single.config_path, "JSON config file");
  single_cmd->add_option("--omega-e", single.omega_e, "system frequency");
  single_cmd->add_option("--omega-j", single.omega_j, "reservoir frequency");
  single_cmd->add_option("--d", single.d, "coupling strength");
  single_cmd->add_option("--n", single.photon_number, "reservoir photon number N")
      ->check(CLI::NonNegativeNumber);
  single_cmd->add_option("--t-max", single.t_max, "largest interaction time");
  single_cmd->add_option("--samples", single.samples, "number of time samples");
  single_cmd->add_flag("--closed-form", single.closed_form, "also emit the resonant closed form");
  single_cmd->add_flag("--resolvent-inversion", single.resolvent_inversion,
                       "also emit the numeric contour inversion");
  single_cmd->add_flag("--oracle", single.oracle, "also emit the brute-force factor");
  single_cmd->add_flag("--weights", single.weights, "include reduced-density weight columns");

  MultiModeArgs multi;
  auto* multi_cmd = app.add_subcommand("multi-mode", "factor of a vacuum comb reservoir");
  multi_cmd->add_option("--config", multi.config_path, "JSON config file");
  multi_cmd->add_option("--omega-e", multi.omega_e, "system frequency");
  multi_cmd->add_option("--center", multi.center, "comb centre frequency");
  multi_cmd->add_option("--half-bandwidth", multi.half_bandwidth, "comb half bandwidth");
  multi_cmd->add_option("--count", multi.count, "comb mode count");
  multi_cmd->add_option("--coupling", multi.coupling, "uniform coupling");
  multi_cmd->add_option("--t-max", multi.t_max, "largest interaction time");
  multi_cmd->add_option("--samples", multi.samples, "number of time samples");
  multi_cmd->add_flag("--resolvent-inversion", multi.resolvent_inversion,
                      "also emit the numeric contour inversion");
  multi_cmd->add_flag("--oracle", multi.oracle, "also emit the brute-force factor");
  multi_cmd->add_flag("--weights", multi.weights, "include reduced-density weight columns");

  ContinuumArgs continuum;
  auto* continuum_cmd =
      app.add_subcommand("continuum", "Wigner-Weisskopf rate, shift and exponential law");
  continuum_cmd->add_option("--rho", continuum.rho, "flat mode density");
  continuum_cmd->add_option("--d", continuum.d, "flat coupling profile");
  continuum_cmd->add_option("--omega-e", continuum.omega_e, "system frequency");
  continuum_cmd->add_option("--support-lo", continuum.support_lo, "support lower edge");
  continuum_cmd->add_option("--support-hi", continuum.support_hi, "support upper edge");
  continuum_cmd->add_option("--t-max", continuum.t_max, "largest time for the exponential CSV");
  continuum_cmd->add_option("--samples", continuum.samples, "number of time samples");
  continuum_cmd->add_option("--comb-count", continuum.comb_count,
                            "also fit a finite comb with this many modes");

  CorrelationArgs correlation;
  auto* correlation_cmd =
      app.add_subcommand("correlation", "second-order correlation grid G(t, t')");
  correlation_cmd->add_option("--config", correlation.config_path, "JSON config file");
  correlation_cmd->add_option("--p-upper", correlation.p_upper, "|0g,2e> weight");
  correlation_cmd->add_option("--p-mid", correlation.p_mid, "|1g,1e> weight");
  correlation_cmd->add_option("--p-lower", correlation.p_lower, "|2g,0e> weight");
  correlation_cmd->add_flag("--from-model", correlation.from_model,
                            "compute the weights from a single-mode evolution");
  correlation_cmd->add_option("--omega-e", correlation.omega_e, "system frequency");
  correlation_cmd->add_option("--omega-j", correlation.omega_j, "reservoir frequency");
  correlation_cmd->add_option("--d", correlation.d, "coupling strength");
  correlation_cmd->add_option("--n", correlation.photon_number, "reservoir photon number");
  correlation_cmd->add_option("--t-interaction", correlation.interaction_time,
                              "interaction time T before measurement");
  correlation_cmd->add_option("--t-max", correlation.t_max, "measurement-time grid extent");
  correlation_cmd->add_option("--grid", correlation.grid, "grid points per axis");

  ReproduceArgs reproduce;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "canned parameter scans");
  reproduce_cmd->add_option("figure", reproduce.figure, "fig1 | fig2 | continuum")->required();
  reproduce_cmd->add_option("--samples", reproduce.samples, "samples per curve (0: default)");
  reproduce_cmd->add_option("--collapse-threshold", reproduce.collapse_threshold,
                            "collapse detection level");
  reproduce_cmd->add_option("--revival-threshold", reproduce.revival_threshold,
                            "revival detection level");
  reproduce_cmd->add_flag("--off-grid", reproduce.off_grid,
                          "place omega_e between comb frequencies");

  DumpArgs dump;
  auto* dump_cmd = app.add_subcommand("dump-hamiltonian", "CSV dump of a subspace matrix");
  dump_cmd->add_option("--config", dump.config_path, "JSON config file");
  dump_cmd->add_option("--omega-e", dump.omega_e, "system frequency");
  dump_cmd->add_option("--omega-j", dump.omega_j, "reservoir frequency");
  dump_cmd->add_option("--d", dump.d, "coupling strength");
  dump_cmd->add_option("--n", dump.photon_number,
                       "photon number for the single-mode subspace (omit for multi-mode)");
  dump_cmd->add_option("--count", dump.comb_count, "comb mode count (multi-mode)");
  dump_cmd->add_option("--half-bandwidth", dump.half_bandwidth, "comb half bandwidth");
  dump_cmd->add_option("--coupling", dump.coupling, "comb coupling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    emit_error("config", error.what());
    return 2;
  }

  try {
    if (single_cmd->parsed()) return cmd_single_mode(global, single, *single_cmd);
    if (multi_cmd->parsed()) return cmd_multi_mode(global, multi, *multi_cmd);
    if (continuum_cmd->parsed()) return cmd_continuum(global, continuum);
    if (correlation_cmd->parsed()) return cmd_correlation(global, correlation, *correlation_cmd);
    if (reproduce_cmd->parsed()) return cmd_reproduce(global, reproduce);
    if (dump_cmd->parsed()) return cmd_dump_hamiltonian(global, dump);
  } catch (const ConfigError& error) {
    emit_error("config", error.what());
    return 2;
  } catch (const ValidationError& error) {
    emit_error("config", error.what(), error.report().errors);
    return 2;
  } catch (const std::invalid_argument& error) {
    emit_error("config", error.what());
    return 2;
  } catch (const QuadratureError& error) {
    emit_error("numeric", error.what());
    return 3;
  } catch (const std::exception& error) {
    emit_error("numeric", error.what());
    return 3;
  }
  return 0;
}
