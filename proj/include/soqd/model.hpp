#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace soqd {

using complex = std::complex<double>;

/// One reservoir mode: frequency omega_j and coupling strength d(omega_j).
/// Couplings are kept non-negative real; a global phase on the interaction
/// is unobservable in every quantity computed here.
struct ReservoirMode {
  double omega = 0.0;
  double d = 0.0;
};

/// Amplitudes of the measured superposition, |c1|^2 + |c2|^2 = 1.
struct MeasurementCoeffs {
  complex c1{1.0 / 1.4142135623730951, 0.0};
  complex c2{1.0 / 1.4142135623730951, 0.0};

  double norm_squared() const { return std::norm(c1) + std::norm(c2); }
};

inline constexpr double kMeasurementNormTol = 1e-12;

/// Equally spaced reservoir comb on [center - W, center + W] with uniform
/// coupling. count == 1 degenerates to a single mode at `center`.
struct CombSpec {
  double center = 1.0;
  double half_bandwidth = 0.4;
  std::size_t count = 1;
  double coupling = 0.0;
};

/// Continuum reservoir profile: mode density rho(omega) and coupling d(omega)
/// on a closed support interval.
struct SpectralDensity {
  std::function<double(double)> rho;
  std::function<double(double)> d;
  double support_lo = 0.0;
  double support_hi = 0.0;
};

/// Full physical configuration. The ground-mode frequency is fixed at 0;
/// `modes` may be empty only for the free-evolution case.
struct ModelParams {
  double omega_e = 1.0;
  std::vector<ReservoirMode> modes;
  MeasurementCoeffs measurement;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  std::string joined() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) out << "; ";
      out << errors[i];
    }
    return out.str();
  }
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(ValidationReport report)
      : std::invalid_argument(report.joined()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Builds the comb modes. Frequencies are constructed symmetrically about
/// `center` so that mirrored pairs cancel exactly in floating point.
inline std::vector<ReservoirMode> build_comb(const CombSpec& spec) {
  if (spec.count == 0) throw std::invalid_argument("build_comb: count must be >= 1");
  if (!std::isfinite(spec.center) || !std::isfinite(spec.half_bandwidth) ||
      !std::isfinite(spec.coupling)) {
    throw std::invalid_argument("build_comb: non-finite input");
  }
  if (spec.count > 1 && spec.half_bandwidth <= 0.0) {
    throw std::invalid_argument("build_comb: half_bandwidth must be > 0 for count > 1");
  }
  if (spec.coupling < 0.0) throw std::invalid_argument("build_comb: coupling must be >= 0");

  std::vector<ReservoirMode> modes;
  modes.reserve(spec.count);
  if (spec.count == 1) {
    modes.push_back({spec.center, spec.coupling});
    return modes;
  }
  const auto n = static_cast<long>(spec.count);
  for (long i = 0; i < n; ++i) {
    // (2i - (n-1))/(n-1) runs over exactly mirrored rationals in [-1, 1].
    const double x = static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
    modes.push_back({spec.center + spec.half_bandwidth * x, spec.coupling});
  }
  return modes;
}

inline double comb_spacing(const CombSpec& spec) {
  if (spec.count < 2) return 0.0;
  return 2.0 * spec.half_bandwidth / static_cast<double>(spec.count - 1);
}

/// Checks every invariant and returns the full list of violations.
/// Duplicate mode frequencies are physically admissible and only warn.
inline ValidationReport validate(const ModelParams& params) {
  ValidationReport report;
  if (!std::isfinite(params.omega_e)) {
    report.errors.push_back("omega_e is not finite");
  } else if (params.omega_e <= 0.0) {
    report.errors.push_back("omega_e must be > 0");
  }

  const double norm = params.measurement.norm_squared();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kMeasurementNormTol) {
    std::ostringstream msg;
    msg << "measurement coefficients are not normalized: |c1|^2 + |c2|^2 = " << norm;
    report.errors.push_back(msg.str());
  }

  for (std::size_t j = 0; j < params.modes.size(); ++j) {
    const auto& mode = params.modes[j];
    if (!std::isfinite(mode.omega) || !std::isfinite(mode.d)) {
      report.errors.push_back("mode " + std::to_string(j) + " has non-finite entries");
      continue;
    }
    if (mode.d < 0.0) {
      report.errors.push_back("mode " + std::to_string(j) + " has negative coupling");
    }
    for (std::size_t k = j + 1; k < params.modes.size(); ++k) {
      if (params.modes[k].omega == mode.omega) {
        report.warnings.push_back("modes " + std::to_string(j) + " and " + std::to_string(k) +
                                  " share frequency " + std::to_string(mode.omega));
      }
    }
  }
  return report;
}

/// validate() + throw on any error. Returns the params unchanged.
inline ModelParams validated(ModelParams params) {
  ValidationReport report = validate(params);
  if (!report.ok()) throw ValidationError(std::move(report));
  return params;
}

}  // namespace soqd
