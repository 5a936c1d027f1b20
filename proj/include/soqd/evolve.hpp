#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "soqd/subspace.hpp"

namespace soqd {

enum class CurveMethod { Evolution, ResolventInversion, ClosedFormResonant, WignerWeisskopf };

inline const char* to_string(CurveMethod method) {
  switch (method) {
    case CurveMethod::Evolution: return "evolution";
    case CurveMethod::ResolventInversion: return "resolvent-inversion";
    case CurveMethod::ClosedFormResonant: return "closed-form-resonant";
    case CurveMethod::WignerWeisskopf: return "wigner-weisskopf";
  }
  return "unknown";
}

/// Sampled decoherence factor with provenance.
struct DecoherenceCurve {
  std::vector<double> times;
  std::vector<double> factor;
  CurveMethod method = CurveMethod::Evolution;
  std::string params_digest;
};

/// Complex amplitudes (M|U(T)|initial) for all basis labels M. Rows index
/// times, columns index basis labels in the system's fixed order.
struct PropagatorRow {
  std::vector<double> times;
  BasisLabel initial;
  Eigen::MatrixXcd amplitudes;
};

struct ReducedDensityWeights {
  double p_upper = 0.0;  // |0_g,2_e> component
  double p_mid = 0.0;    // |1_g,1_e> component
  double p_lower = 0.0;  // |2_g,0_e> component
};

struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // orthonormal columns, H = V diag(values) V^T
};

inline std::vector<double> uniform_times(double t_max, std::size_t samples = 2048) {
  if (samples == 0 || !(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("uniform_times: need t_max >= 0 and samples >= 1");
  }
  std::vector<double> times(samples);
  if (samples == 1) {
    times[0] = 0.0;
    return times;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    times[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  return times;
}

/// Exact spectral decomposition of the (real symmetric) subspace Hamiltonian.
inline Eigensystem eigendecompose(const SubspaceSystem& system) {
  const auto& h = system.hamiltonian;
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("eigendecompose: empty or non-square Hamiltonian");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("eigendecompose: Hamiltonian is not Hermitian (max asymmetry " +
                                std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Grid-density advisory: the factor beats at eigenvalue differences, so the
/// grid should carry >= 20 samples per shortest period 2*pi/(lam_max - lam_min).
inline std::optional<std::string> check_time_grid(const SubspaceSystem& system,
                                                  const std::vector<double>& times) {
  if (times.size() < 2) return std::nullopt;
  const Eigensystem eig = eigendecompose(system);
  const double span = eig.values.maxCoeff() - eig.values.minCoeff();
  if (span <= 0.0) return std::nullopt;
  const double period = 2.0 * std::numbers::pi / span;
  double dt_max = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) dt_max = std::max(dt_max, times[i] - times[i - 1]);
  if (dt_max * 20.0 > period) {
    std::ostringstream msg;
    msg << "time grid undersamples the fastest beat: dt = " << dt_max
        << " but 20 samples per period need dt <= " << period / 20.0;
    return msg.str();
  }
  return std::nullopt;
}

/// (M|U(T)|initial) = sum_k V[M,k] exp(-i lam_k T) V[initial,k].
/// T = 0 rows are set to the exact unit vector.
inline PropagatorRow propagate(const SubspaceSystem& system, const BasisLabel& initial,
                               const std::vector<double>& times) {
  const auto init_index = find_label(system, initial);
  if (!init_index) {
    throw std::invalid_argument("propagate: initial label " + to_string(initial) +
                                " not in subspace basis");
  }
  for (double t : times) {
    if (!std::isfinite(t)) throw std::invalid_argument("propagate: non-finite time");
  }
  const Eigensystem eig = eigendecompose(system);
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  const auto n_t = static_cast<Eigen::Index>(times.size());

  PropagatorRow row;
  row.times = times;
  row.initial = initial;
  row.amplitudes.setZero(n_t, dim);

  const Eigen::VectorXd init_components = eig.vectors.row(static_cast<Eigen::Index>(*init_index));
  for (Eigen::Index it = 0; it < n_t; ++it) {
    const double t = times[static_cast<std::size_t>(it)];
    if (t == 0.0) {
      row.amplitudes(it, static_cast<Eigen::Index>(*init_index)) = 1.0;
      continue;
    }
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      phases(k) = std::polar(init_components(k), -eig.values(k) * t);
    }
    row.amplitudes.row(it) = (eig.vectors * phases).transpose();
  }
  return row;
}

namespace detail {

inline BasisLabel home_label(const SubspaceSystem& system) {
  if (system.photon_number) return BasisLabel{SingleModeLabel{0}};
  return BasisLabel{VacuumLabel{}};
}

inline std::string system_digest(const SubspaceSystem& system, CurveMethod method) {
  std::ostringstream out;
  out << to_string(method) << " dim=" << system.dimension();
  if (system.photon_number) out << " N=" << *system.photon_number;
  out.precision(17);
  out << " trH=" << system.hamiltonian.trace() << " frobH=" << system.hamiltonian.norm();
  return out.str();
}

}  // namespace detail

/// |diagonal amplitude|^2 on the subspace home state (|N) or |0)).
/// Raw values are kept unclipped; clipping to [0, 1] is display-only.
inline DecoherenceCurve decoherence_factor(const SubspaceSystem& system,
                                           const std::vector<double>& times) {
  if (auto warning = check_time_grid(system, times)) {
    std::clog << "soqd: " << *warning << '\n';
  }
  const BasisLabel home = detail::home_label(system);
  const PropagatorRow row = propagate(system, home, times);
  const auto home_index = static_cast<Eigen::Index>(*find_label(system, home));

  DecoherenceCurve curve;
  curve.times = times;
  curve.method = CurveMethod::Evolution;
  curve.params_digest = detail::system_digest(system, CurveMethod::Evolution);
  curve.factor.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    curve.factor[i] = std::norm(row.amplitudes(static_cast<Eigen::Index>(i), home_index));
  }
  return curve;
}

/// Diagonal weights of the reduced two-atom density after interaction time T.
/// Off-diagonals vanish identically: each system component is entangled with
/// a distinct orthogonal reservoir Fock state.
inline ReducedDensityWeights reduced_density(const SubspaceSystem& system, double t) {
  const BasisLabel home = detail::home_label(system);
  const PropagatorRow row = propagate(system, home, {t});

  ReducedDensityWeights weights;
  for (std::size_t m = 0; m < system.basis.size(); ++m) {
    const double population = std::norm(row.amplitudes(0, static_cast<Eigen::Index>(m)));
    const BasisLabel& label = system.basis[m];
    if (const auto* single = std::get_if<SingleModeLabel>(&label)) {
      if (single->offset < 0) weights.p_upper += population;
      else if (single->offset == 0) weights.p_mid += population;
      else weights.p_lower += population;
    } else if (std::holds_alternative<VacuumLabel>(label)) {
      weights.p_mid += population;
    } else {
      weights.p_lower += population;  // |1_j) carries |2_g,0_e>
    }
  }
  return weights;
}

}  // namespace soqd
