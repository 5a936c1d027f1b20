#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "soqd/evolve.hpp"
#include "soqd/model.hpp"
#include "soqd/quadrature.hpp"

namespace soqd {

/// Diagonal resolvent element in the continued-fraction form
///
///   evaluate(z) = 1 / (z - level - sum_k weight_k / (z - position_k)),
///
/// which covers both the single-mode ladder diagonal and the many-mode
/// vacuum diagonal. Herglotz by construction: Im evaluate(z) and Im z have
/// opposite signs off the real axis.
struct ResolventDiagonal {
  struct SelfEnergyTerm {
    double weight = 0.0;    // squared coupling into the detuned level
    double position = 0.0;  // detuned level energy
  };

  double level = 0.0;  // bare diagonal energy E_N or omega_e
  std::vector<SelfEnergyTerm> terms;
  std::optional<std::vector<double>> poles_hint;  // resonant single-mode case

  complex operator()(complex z) const {
    complex denom = z - level;
    for (const auto& term : terms) {
      denom -= term.weight / (z - term.position);
    }
    return 1.0 / denom;
  }

  double total_weight() const {
    double sum = 0.0;
    for (const auto& term : terms) sum += term.weight;
    return sum;
  }

  /// Interval guaranteed to contain every pole (Gershgorin bound of the
  /// equivalent arrowhead matrix).
  std::pair<double, double> pole_window() const {
    double lo = level;
    double hi = level;
    double pad = 0.0;
    for (const auto& term : terms) {
      lo = std::min(lo, term.position);
      hi = std::max(hi, term.position);
      pad += std::sqrt(term.weight);
    }
    return {lo - pad, hi + pad};
  }
};

/// Single-mode diagonal (N|G(z)|N): level E_N = omega_e + N*omega_j, with
/// self-energy weight 2N d^2 on the neighbor at E_N - Delta and weight
/// 2(N+1) d^2 on the neighbor at E_N + Delta, Delta = omega_j - omega_e.
/// The 2N d^2 term is absent for N = 0.
inline ResolventDiagonal single_mode_resolvent(const ModelParams& params, long photon_number) {
  if (params.modes.size() != 1) {
    throw std::invalid_argument("single_mode_resolvent: exactly one reservoir mode required");
  }
  if (photon_number < 0) {
    throw std::invalid_argument("single_mode_resolvent: N must be >= 0");
  }
  const double omega_j = params.modes[0].omega;
  const double d = params.modes[0].d;
  const double n = static_cast<double>(photon_number);
  const double level = params.omega_e + n * omega_j;
  const double detuning = omega_j - params.omega_e;

  ResolventDiagonal res;
  res.level = level;
  const double w_down = 2.0 * n * d * d;
  const double w_up = 2.0 * (n + 1.0) * d * d;
  if (w_down > 0.0) res.terms.push_back({w_down, level - detuning});
  if (w_up > 0.0) res.terms.push_back({w_up, level + detuning});
  if (std::abs(detuning) <= 1e-12 && d > 0.0) {
    const double omega_n = d * std::sqrt(4.0 * n + 2.0);
    res.poles_hint = std::vector<double>{level - omega_n, level + omega_n};
  }
  return res;
}

/// Many-mode vacuum diagonal (0|G(z)|0) = 1/(z - omega_e - sum_j 2 d_j^2/(z - omega_j)).
inline ResolventDiagonal multi_mode_resolvent(const ModelParams& params) {
  if (params.modes.empty()) {
    throw std::invalid_argument("multi_mode_resolvent: at least one reservoir mode required");
  }
  ResolventDiagonal res;
  res.level = params.omega_e;
  for (const auto& mode : params.modes) {
    const double weight = 2.0 * mode.d * mode.d;
    if (weight > 0.0) res.terms.push_back({weight, mode.omega});
  }
  return res;
}

/// Resonant (Delta = 0) closed form: the two poles of the single-mode
/// diagonal sit at E_N -+ d*sqrt(4N+2) with equal residues, so the factor is
/// cos^2(d*sqrt(4N+2)*T). The frequency is fixed by the pole algebra; the
/// adjudication test in the suite compares candidate frequencies against the
/// evolution backend.
inline DecoherenceCurve resonant_closed_form(const ModelParams& params, long photon_number,
                                             const std::vector<double>& times) {
  if (params.modes.size() != 1) {
    throw std::invalid_argument("resonant_closed_form: exactly one reservoir mode required");
  }
  const double detuning = params.modes[0].omega - params.omega_e;
  if (std::abs(detuning) > 1e-12) {
    throw std::invalid_argument("resonant_closed_form: requires Delta = 0, got Delta = " +
                                std::to_string(detuning));
  }
  if (photon_number < 0) {
    throw std::invalid_argument("resonant_closed_form: N must be >= 0");
  }
  const double d = params.modes[0].d;
  const double omega_n = d * std::sqrt(4.0 * static_cast<double>(photon_number) + 2.0);

  DecoherenceCurve curve;
  curve.times = times;
  curve.method = CurveMethod::ClosedFormResonant;
  {
    std::ostringstream digest;
    digest.precision(17);
    digest << "closed-form-resonant N=" << photon_number << " Omega=" << omega_n;
    curve.params_digest = digest.str();
  }
  curve.factor.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double c = std::cos(omega_n * times[i]);
    curve.factor[i] = c * c;
  }
  return curve;
}

struct InversionOptions {
  double eta_scale = 1e-3;       // contour height as a fraction of the spectral span
  double tolerance = 1e-6;       // absolute amplitude tolerance per time point
  std::size_t max_intervals = 30000;
};

/// Numeric Fourier inversion of the resolvent diagonal along z = x + i*eta:
///
///   (N|U(T)|N) = (i/2pi) integral dz e^{-izT} (N|(z - H + i0+)^{-1}|N).
///
/// The free pole 1/(z - level) is inverted analytically (contribution
/// e^{-i*level*T}); the remainder R(z) = G(z) - 1/(z - level) decays as
/// 1/x^3, which makes the truncated contour integral absolutely convergent
/// and removes the Heaviside-step ambiguity at T = 0. Verification tool
/// only; `evolve` is the production propagator.
inline DecoherenceCurve invert_fourier(const ResolventDiagonal& res,
                                       const std::vector<double>& times,
                                       const InversionOptions& options = {}) {
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) {
      throw std::invalid_argument("invert_fourier: times must be finite and >= 0");
    }
  }

  DecoherenceCurve curve;
  curve.times = times;
  curve.method = CurveMethod::ResolventInversion;
  curve.factor.resize(times.size());

  if (res.terms.empty()) {  // free evolution: amplitude is exactly a phase
    std::fill(curve.factor.begin(), curve.factor.end(), 1.0);
    curve.params_digest = "resolvent-inversion free max_quad_error=0";
    return curve;
  }

  const auto [window_lo, window_hi] = res.pole_window();
  const double span = std::max(window_hi - window_lo, 1e-12);
  const double tail_weight = res.total_weight();  // |R| ~ tail_weight / |x|^3
  const double tol = options.tolerance;

  std::vector<double> breakpoints{window_lo, window_hi, res.level};
  for (const auto& term : res.terms) breakpoints.push_back(term.position);

  double worst_error = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    // The integral is eta-independent, so cap eta at 1/t: the e^{eta t}
    // amplification along the contour then never exceeds e.
    const double eta = std::min(options.eta_scale * span, 1.0 / std::max(t, 1.0));
    // Truncation: the static bound C/(2L^2) governs small T, the oscillatory
    // bound C/(L^3 T) takes over for large T.
    const double l_static = std::sqrt(tail_weight / (2.0 * tol));
    const double l_osc = std::cbrt(tail_weight / (tol * std::max(t, 1e-3)));
    const double tail = std::max(2.0 * span, std::min(l_static, l_osc));
    const double a = window_lo - tail;
    const double b = window_hi + tail;

    auto integrand = [&](double x) -> complex {
      const complex z(x, eta);
      const complex remainder = res(z) - 1.0 / (z - res.level);
      return std::exp(complex(0.0, -1.0) * z * t) * remainder;
    };
    auto integral = integrate_adaptive<complex>(integrand, a, b, tol * 2.0 * std::numbers::pi,
                                                0.0, options.max_intervals, breakpoints);
    const double achieved = integral.error_estimate / (2.0 * std::numbers::pi);
    worst_error = std::max(worst_error, achieved);
    if (!integral.converged) {
      throw QuadratureError(
          "invert_fourier: contour quadrature did not converge at T = " + std::to_string(t) +
              " (achieved amplitude error estimate " + std::to_string(achieved) + ")",
          achieved);
    }
    const complex amplitude = std::polar(1.0, -res.level * t) +
                              complex(0.0, 1.0) / (2.0 * std::numbers::pi) * integral.value;
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
      throw QuadratureError("invert_fourier: non-finite amplitude at T = " + std::to_string(t),
                            achieved);
    }
    curve.factor[i] = std::norm(amplitude);
  }

  std::ostringstream digest;
  digest.precision(6);
  digest << "resolvent-inversion max_quad_error=" << worst_error;
  curve.params_digest = digest.str();
  return curve;
}

struct WignerWeisskopfResult {
  double gamma_e = 0.0;  // decay rate of the factor, 4*pi*rho(omega_e)*d(omega_e)^2
  double delta_e = 0.0;  // frequency renormalization, 2 PV int rho d^2/(omega_e - omega)
};

/// Continuum-limit decay rate and frequency shift of the vacuum-sector
/// factor. The shift is computed by symmetric excision with Richardson
/// extrapolation (see principal_value); it is reported but never fed back
/// into a propagator.
inline WignerWeisskopfResult wigner_weisskopf(const SpectralDensity& sd, double omega_e) {
  if (!sd.rho || !sd.d) {
    throw std::invalid_argument("wigner_weisskopf: spectral density callbacks missing");
  }
  if (!(sd.support_lo < omega_e && omega_e < sd.support_hi)) {
    throw std::invalid_argument("wigner_weisskopf: omega_e must be interior to the support");
  }

  WignerWeisskopfResult result;
  const double rho_e = sd.rho(omega_e);
  const double d_e = sd.d(omega_e);
  result.gamma_e = 4.0 * std::numbers::pi * rho_e * d_e * d_e;
  if (!std::isfinite(result.gamma_e) || result.gamma_e < 0.0) {
    throw std::invalid_argument("wigner_weisskopf: rho(omega_e) d^2(omega_e) must be finite and >= 0");
  }

  auto numerator = [&](double omega) {
    const double dd = sd.d(omega);
    return 2.0 * sd.rho(omega) * dd * dd;
  };
  result.delta_e =
      principal_value(numerator, sd.support_lo, sd.support_hi, omega_e, 1e-11).value;
  return result;
}

/// factor(T) = exp(-gamma_e T).
inline DecoherenceCurve exponential_law(const WignerWeisskopfResult& ww,
                                        const std::vector<double>& times) {
  if (!(ww.gamma_e >= 0.0)) {
    throw std::invalid_argument("exponential_law: gamma_e must be >= 0");
  }
  DecoherenceCurve curve;
  curve.times = times;
  curve.method = CurveMethod::WignerWeisskopf;
  {
    std::ostringstream digest;
    digest.precision(17);
    digest << "wigner-weisskopf gamma=" << ww.gamma_e << " delta=" << ww.delta_e;
    curve.params_digest = digest.str();
  }
  curve.factor.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    curve.factor[i] = std::exp(-ww.gamma_e * times[i]);
  }
  return curve;
}

}  // namespace soqd
