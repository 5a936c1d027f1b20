#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "soqd/correlate.hpp"
#include "soqd/evolve.hpp"
#include "soqd/experiments.hpp"
#include "soqd/model.hpp"
#include "soqd/subspace.hpp"

namespace soqd {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: lossless double round-trip, locale-independent.
inline std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

/// FNV-1a 64-bit over raw bytes, hex-encoded. Used as the config digest;
/// content-addressed, not cryptographic.
inline std::string digest_bytes(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

// ---------------------------------------------------------------------------
// JSON configuration
//
// Schema: {"omega_e": number,
//          "modes": [{"omega": number, "d": number}, ...]  |
//          "comb": {"center", "half_bandwidth", "count", "coupling"},
//          "measurement": {"c1_re","c1_im","c2_re","c2_im"}}   (optional)
// Exactly one of modes/comb may be present; neither is allowed for the
// free-evolution case.
// ---------------------------------------------------------------------------

inline ModelParams params_from_json(const nlohmann::json& config, bool reservoir_required) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  ModelParams params;
  try {
    if (config.contains("omega_e")) params.omega_e = config.at("omega_e").get<double>();

    const bool has_modes = config.contains("modes");
    const bool has_comb = config.contains("comb");
    if (has_modes && has_comb) {
      throw ConfigError("config must not contain both 'modes' and 'comb'");
    }
    if (reservoir_required && !has_modes && !has_comb) {
      throw ConfigError("config requires one of 'modes' or 'comb'");
    }
    if (has_modes) {
      for (const auto& entry : config.at("modes")) {
        params.modes.push_back(
            {entry.at("omega").get<double>(), entry.at("d").get<double>()});
      }
    } else if (has_comb) {
      const auto& comb = config.at("comb");
      CombSpec spec;
      spec.center = comb.at("center").get<double>();
      spec.half_bandwidth = comb.at("half_bandwidth").get<double>();
      spec.count = comb.at("count").get<std::size_t>();
      spec.coupling = comb.at("coupling").get<double>();
      params.modes = build_comb(spec);
    }

    if (config.contains("measurement")) {
      const auto& m = config.at("measurement");
      params.measurement.c1 = {m.at("c1_re").get<double>(), m.at("c1_im").get<double>()};
      params.measurement.c2 = {m.at("c2_re").get<double>(), m.at("c2_im").get<double>()};
    }
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError(std::string("malformed config: ") + error.what());
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }

  const ValidationReport report = validate(params);
  if (!report.ok()) throw ConfigError("invalid config: " + report.joined());
  return params;
}

struct LoadedConfig {
  ModelParams params;
  std::string digest;
};

inline LoadedConfig load_config(const std::filesystem::path& path, bool reservoir_required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json config;
  try {
    config = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError(std::string("config is not valid JSON: ") + error.what());
  }
  return {params_from_json(config, reservoir_required), digest_bytes(text)};
}

// ---------------------------------------------------------------------------
// CSV emission. Data files are deterministic: fixed header, fixed float
// formatting, no timestamps.
// ---------------------------------------------------------------------------

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  if (columns.empty() || header.size() != columns.size()) {
    throw std::invalid_argument("write_csv: header/column mismatch");
  }
  const std::size_t rows = columns.front().size();
  for (const auto& column : columns) {
    if (column.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << format_g17(columns[c][r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Emitted factor columns are clipped to [0, 1]; raw (unclipped) values stay
// on the in-memory curve for verification.
inline std::vector<double> clipped_unit(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::min(1.0, std::max(0.0, values[i]));
  }
  return out;
}

inline void write_curve_csv(const std::filesystem::path& path, const DecoherenceCurve& curve) {
  write_csv(path, {"T", "factor"}, {curve.times, clipped_unit(curve.factor)});
}

inline void write_curve_with_weights_csv(const std::filesystem::path& path,
                                         const DecoherenceCurve& curve,
                                         const std::vector<ReducedDensityWeights>& weights) {
  std::vector<double> upper(weights.size());
  std::vector<double> mid(weights.size());
  std::vector<double> lower(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    upper[i] = weights[i].p_upper;
    mid[i] = weights[i].p_mid;
    lower[i] = weights[i].p_lower;
  }
  write_csv(path, {"T", "factor", "p_upper", "p_mid", "p_lower"},
            {curve.times, clipped_unit(curve.factor), upper, mid, lower});
}

/// Grid CSV: first row carries the t' values, first column the t values.
inline void write_grid_csv(const std::filesystem::path& path, const CorrelationGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << "t\\tprime";
  for (double tp : grid.tprime_values) out << ',' << format_g17(tp);
  out << '\n';
  for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
    out << format_g17(grid.t_values[i]);
    for (std::size_t j = 0; j < grid.tprime_values.size(); ++j) {
      out << ',' << format_g17(grid.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Matrix dump, row-major, each entry as a "re,im" pair of columns.
inline void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << format_g17(matrix(i, j)) << ",0";  // entries are real by construction
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline nlohmann::json features_to_json(const CurveFeatures& features) {
  nlohmann::json json = nlohmann::json::object();
  if (features.dominant_frequency) json["dominant_frequency"] = *features.dominant_frequency;
  if (features.first_minimum_time) json["first_minimum_time"] = *features.first_minimum_time;
  if (features.collapse_time) json["collapse_time"] = *features.collapse_time;
  if (features.revival_time) json["revival_time"] = *features.revival_time;
  if (features.decay) {
    json["decay"] = {{"rate", features.decay->rate},
                     {"intercept", features.decay->intercept},
                     {"r_squared", features.decay->r_squared},
                     {"rms_residual", features.decay->rms_residual},
                     {"points", features.decay->points}};
  }
  return json;
}

// ---------------------------------------------------------------------------
// Run manifest. The manifest is metadata, not data: wall time and timestamps
// belong here and only here.
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::string config_digest;
  std::vector<std::string> outputs;
  double wall_ms = 0.0;
  std::string version = kVersion;
};

inline void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  for (const auto& output : manifest.outputs) {
    if (!std::filesystem::exists(output)) {
      throw std::runtime_error("manifest lists missing output: " + output);
    }
  }
  nlohmann::json json;
  json["command"] = manifest.command;
  json["parameters"] = manifest.parameters;
  json["results"] = manifest.results;
  if (!manifest.config_digest.empty()) json["config_digest"] = manifest.config_digest;
  json["outputs"] = manifest.outputs;
  json["wall_ms"] = manifest.wall_ms;
  json["version"] = manifest.version;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << json.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace soqd
