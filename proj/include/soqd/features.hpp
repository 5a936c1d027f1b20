#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "soqd/evolve.hpp"

namespace soqd {

namespace detail {

inline void require_uniform_grid(const std::vector<double>& times) {
  if (times.size() < 2) throw std::invalid_argument("feature extraction needs >= 2 samples");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("feature extraction needs an increasing grid");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument("feature extraction needs a uniform time grid");
    }
  }
}

// Iterative radix-2 FFT, input zero-padded to a power of two by the caller.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> root(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= root;
      }
    }
  }
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Vertex of the parabola through three equally spaced samples; returns the
// offset from the centre sample in units of the spacing, clamped to [-1, 1].
inline double parabolic_offset(double left, double centre, double right) {
  const double denom = left - 2.0 * centre + right;
  if (denom == 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -1.0, 1.0);
}

}  // namespace detail

/// Location of the magnitude-spectrum peak of (values - mean), Hann-windowed
/// to keep a strong neighbor's sidelobes from masking the true peak, refined
/// parabolically. Returns nothing for a (numerically) constant input.
inline std::optional<double> dominant_frequency(const std::vector<double>& times,
                                                const std::vector<double>& values) {
  detail::require_uniform_grid(times);
  if (values.size() != times.size()) {
    throw std::invalid_argument("dominant_frequency: size mismatch");
  }
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  double deviation = 0.0;
  for (double v : values) deviation = std::max(deviation, std::abs(v - mean));
  if (deviation < 1e-13 * std::max(1.0, std::abs(mean))) return std::nullopt;

  const std::size_t padded = detail::next_pow2(n);
  std::vector<std::complex<double>> spectrum(padded, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                              static_cast<double>(n - 1)));
    spectrum[i] = (values[i] - mean) * hann;
  }
  detail::fft_radix2(spectrum);

  std::size_t peak = 1;
  double peak_mag = 0.0;
  for (std::size_t k = 1; k <= padded / 2; ++k) {
    const double mag = std::abs(spectrum[k]);
    if (mag > peak_mag) {
      peak_mag = mag;
      peak = k;
    }
  }
  double offset = 0.0;
  if (peak > 1 && peak < padded / 2) {
    offset = detail::parabolic_offset(std::abs(spectrum[peak - 1]), peak_mag,
                                      std::abs(spectrum[peak + 1]));
  }
  const double dt = times[1] - times[0];
  return 2.0 * std::numbers::pi * (static_cast<double>(peak) + offset) /
         (static_cast<double>(padded) * dt);
}

/// First interior local minimum, parabolically refined. Plateaus resolve to
/// their first sample.
inline std::optional<double> first_minimum_time(const std::vector<double>& times,
                                                const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 3) return std::nullopt;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] <= values[i + 1]) {
      const double offset = detail::parabolic_offset(values[i - 1], values[i], values[i + 1]);
      const double dt_left = times[i] - times[i - 1];
      const double dt_right = times[i + 1] - times[i];
      return times[i] + offset * (offset >= 0.0 ? dt_right : dt_left);
    }
  }
  return std::nullopt;
}

struct Thresholds {
  double collapse = 0.1;  // factor level that counts as collapsed
  double revival = 0.5;   // minimum height of a detected revival peak
};

struct CollapseRevival {
  std::optional<double> collapse_time;  // first crossing below the collapse threshold
  std::optional<double> revival_time;   // post-collapse peak location, if high enough
  double post_collapse_peak = 0.0;
};

/// Collapse: first downward crossing of the collapse threshold (linear
/// interpolation). Revival: the factor's maximum after that crossing,
/// parabolically refined, reported only when it clears the revival
/// threshold. A peak-based detector is used rather than
/// first-local-max-above-threshold: under strong coupling the factor rides a
/// fast carrier whose early maxima would otherwise be mistaken for revivals.
/// Undetected features stay absent; nothing is zero-filled.
inline CollapseRevival detect_collapse_revival(const std::vector<double>& times,
                                               const std::vector<double>& factor,
                                               const Thresholds& thresholds = {}) {
  CollapseRevival result;
  if (times.size() != factor.size() || times.size() < 3) return result;

  std::size_t crossing = 0;
  for (std::size_t i = 1; i < factor.size(); ++i) {
    if (factor[i] < thresholds.collapse && factor[i - 1] >= thresholds.collapse) {
      const double run = factor[i - 1] - factor[i];
      const double frac = run > 0.0 ? (factor[i - 1] - thresholds.collapse) / run : 0.0;
      result.collapse_time = times[i - 1] + frac * (times[i] - times[i - 1]);
      crossing = i;
      break;
    }
  }
  if (!result.collapse_time) return result;

  std::size_t peak = crossing;
  for (std::size_t i = crossing; i < factor.size(); ++i) {
    if (factor[i] > factor[peak]) peak = i;
  }
  result.post_collapse_peak = factor[peak];
  if (factor[peak] < thresholds.revival) return result;

  double refined = times[peak];
  if (peak > crossing && peak + 1 < factor.size()) {
    const double offset =
        detail::parabolic_offset(factor[peak - 1], factor[peak], factor[peak + 1]);
    refined += offset * (times[peak + 1] - times[peak]);
  }
  result.revival_time = refined;
  return result;
}

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Least squares of y = -ln(factor) against rate*T (+ intercept when
/// through_origin is false). Samples with nonpositive factor are skipped.
/// The exponential law exp(-Gamma T) has no prefactor, so through-origin is
/// the faithful default.
inline DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& factor,
                               double window_lo, double window_hi, bool through_origin = true) {
  if (times.size() != factor.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window_lo || times[i] > window_hi) continue;
    if (!(factor[i] > 0.0)) continue;
    t.push_back(times[i]);
    y.push_back(-std::log(factor[i]));
  }
  if (t.size() < 2) {
    throw std::invalid_argument("fit_decay_rate: fewer than two usable samples in the window");
  }

  DecayFit fit;
  fit.points = t.size();
  const auto n = static_cast<double>(t.size());
  if (through_origin) {
    double tt = 0.0;
    double ty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      tt += t[i] * t[i];
      ty += t[i] * y[i];
    }
    fit.rate = tt > 0.0 ? ty / tt : 0.0;
    fit.intercept = 0.0;
  } else {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      st += t[i];
      sy += y[i];
      stt += t[i] * t[i];
      sty += t[i] * y[i];
    }
    const double denom = n * stt - st * st;
    fit.rate = denom != 0.0 ? (n * sty - st * sy) / denom : 0.0;
    fit.intercept = (sy - fit.rate * st) / n;
  }

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double predicted = fit.intercept + fit.rate * t[i];
    ss_res += (y[i] - predicted) * (y[i] - predicted);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  fit.rms_residual = std::sqrt(ss_res / n);
  return fit;
}

struct CosineFit {
  double omega = 0.0;
  double offset = 0.0;
  double amp_cos = 0.0;
  double amp_sin = 0.0;
  double rms_residual = 0.0;
};

namespace detail {

inline CosineFit cosine_ls(const std::vector<double>& times, const std::vector<double>& values,
                           double omega) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigen::Vector3d row(1.0, std::cos(omega * times[i]), std::sin(omega * times[i]));
    normal += row * row.transpose();
    rhs += row * values[i];
  }
  const Eigen::Vector3d sol = normal.ldlt().solve(rhs);
  CosineFit fit;
  fit.omega = omega;
  fit.offset = sol(0);
  fit.amp_cos = sol(1);
  fit.amp_sin = sol(2);
  double ss = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double predicted =
        sol(0) + sol(1) * std::cos(omega * times[i]) + sol(2) * std::sin(omega * times[i]);
    ss += (values[i] - predicted) * (values[i] - predicted);
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(times.size()));
  return fit;
}

}  // namespace detail

/// Fits offset + A cos(omega T) + B sin(omega T), with omega seeded by the
/// spectrum peak and refined by golden-section search on the RMS residual
/// within one spectral bin.
inline CosineFit fit_single_cosine(const std::vector<double>& times,
                                   const std::vector<double>& values) {
  const auto seed = dominant_frequency(times, values);
  if (!seed) {
    CosineFit fit = detail::cosine_ls(times, values, 0.0);
    fit.omega = 0.0;
    return fit;
  }
  const double dt = times[1] - times[0];
  const double bin =
      2.0 * std::numbers::pi / (static_cast<double>(detail::next_pow2(times.size())) * dt);
  double lo = std::max(*seed - bin, 0.5 * bin);
  double hi = *seed + bin;

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = detail::cosine_ls(times, values, x1).rms_residual;
  double f2 = detail::cosine_ls(times, values, x2).rms_residual;
  for (int iteration = 0; iteration < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++iteration) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = detail::cosine_ls(times, values, x1).rms_residual;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = detail::cosine_ls(times, values, x2).rms_residual;
    }
  }
  return detail::cosine_ls(times, values, 0.5 * (lo + hi));
}

struct CurveFeatures {
  std::optional<double> dominant_frequency;
  std::optional<double> first_minimum_time;
  std::optional<double> collapse_time;
  std::optional<double> revival_time;
  std::optional<DecayFit> decay;
};

/// Feature bundle for a sampled curve. The decay fit runs over
/// [fit_window_lo, fit_window_hi] when provided, else the full record.
inline CurveFeatures extract_features(const DecoherenceCurve& curve,
                                      const Thresholds& thresholds = {},
                                      std::optional<std::pair<double, double>> fit_window =
                                          std::nullopt,
                                      bool fit_through_origin = true) {
  CurveFeatures features;
  features.dominant_frequency = dominant_frequency(curve.times, curve.factor);
  features.first_minimum_time = first_minimum_time(curve.times, curve.factor);
  const CollapseRevival revival = detect_collapse_revival(curve.times, curve.factor, thresholds);
  features.collapse_time = revival.collapse_time;
  features.revival_time = revival.revival_time;
  const double lo = fit_window ? fit_window->first : curve.times.front();
  const double hi = fit_window ? fit_window->second : curve.times.back();
  try {
    features.decay = fit_decay_rate(curve.times, curve.factor, lo, hi, fit_through_origin);
  } catch (const std::invalid_argument&) {
    features.decay.reset();
  }
  return features;
}

}  // namespace soqd
