#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "soqd/evolve.hpp"
#include "soqd/model.hpp"
#include "soqd/subspace.hpp"

namespace soqd {

/// Occupation numbers (n_g, n_e, reservoir...) of one product Fock state.
struct OccupationState {
  int n_g = 0;
  int n_e = 0;
  std::vector<int> reservoir;

  int atom_number() const { return n_g + n_e; }
  int excitation_number() const {
    return n_e + std::accumulate(reservoir.begin(), reservoir.end(), 0);
  }
  friend bool operator==(const OccupationState& a, const OccupationState& b) {
    return a.n_g == b.n_g && a.n_e == b.n_e && a.reservoir == b.reservoir;
  }
  friend bool operator<(const OccupationState& a, const OccupationState& b) {
    if (a.n_g != b.n_g) return a.n_g < b.n_g;
    if (a.n_e != b.n_e) return a.n_e < b.n_e;
    return a.reservoir < b.reservoir;
  }
};

inline std::string to_string(const OccupationState& s) {
  std::ostringstream out;
  out << "|" << s.n_g << "_g," << s.n_e << "_e";
  for (int n : s.reservoir) out << "," << n;
  out << ">";
  return out.str();
}

/// Brute-force Fock basis for one conserved sector. The interaction conserves
/// both the atom number n_g + n_e and the excitation number n_e + sum_j n_j,
/// so filtering on the initial state's quantum numbers is exact: no
/// truncation error anywhere.
struct FockSpace {
  std::vector<int> cutoffs;            // per-mode caps: [g, e, reservoir...]
  std::vector<OccupationState> basis;  // excitation-filtered, ordered
  int atom_number = 0;
  int excitation_number = 0;

  std::size_t dimension() const { return basis.size(); }
  double unfiltered_dimension() const {
    double dim = 1.0;
    for (int c : cutoffs) dim *= static_cast<double>(c) + 1.0;
    return dim;
  }
};

inline FockSpace enumerate_sector(const ModelParams& params, const OccupationState& initial,
                                  std::size_t max_states = 20000) {
  const auto n_modes = params.modes.size();
  if (initial.reservoir.size() != n_modes) {
    throw std::invalid_argument("enumerate_sector: initial state has " +
                                std::to_string(initial.reservoir.size()) +
                                " reservoir entries for " + std::to_string(n_modes) + " modes");
  }
  if (initial.n_g < 0 || initial.n_e < 0) {
    throw std::invalid_argument("enumerate_sector: negative occupation");
  }
  for (int n : initial.reservoir) {
    if (n < 0) throw std::invalid_argument("enumerate_sector: negative occupation");
  }

  FockSpace space;
  space.atom_number = initial.atom_number();
  space.excitation_number = initial.excitation_number();
  space.cutoffs.assign(n_modes + 2, 0);
  space.cutoffs[0] = space.atom_number;
  space.cutoffs[1] = std::min(space.atom_number, space.excitation_number);
  for (std::size_t j = 0; j < n_modes; ++j) {
    space.cutoffs[j + 2] = space.excitation_number;
  }

  // n_e fixes n_g and the total reservoir occupation; enumerate compositions.
  std::vector<int> reservoir(n_modes, 0);
  auto emit = [&](int n_g, int n_e) {
    if (space.basis.size() >= max_states) {
      throw std::runtime_error("enumerate_sector: basis exceeds cap of " +
                               std::to_string(max_states) + " states");
    }
    space.basis.push_back({n_g, n_e, reservoir});
  };
  for (int n_e = 0; n_e <= space.cutoffs[1]; ++n_e) {
    const int n_g = space.atom_number - n_e;
    const int quanta = space.excitation_number - n_e;
    if (quanta < 0) continue;
    if (n_modes == 0) {
      if (quanta == 0) emit(n_g, n_e);
      continue;
    }
    // Distribute `quanta` over the reservoir modes, lexicographically.
    std::fill(reservoir.begin(), reservoir.end(), 0);
    auto recurse = [&](auto&& self, std::size_t mode, int remaining) -> void {
      if (mode + 1 == n_modes) {
        reservoir[mode] = remaining;
        emit(n_g, n_e);
        reservoir[mode] = 0;
        return;
      }
      for (int n = 0; n <= remaining; ++n) {
        reservoir[mode] = n;
        self(self, mode + 1, remaining - n);
      }
      reservoir[mode] = 0;
    };
    recurse(recurse, 0, quanta);
  }
  return space;
}

/// Assembles H = H0 + V on the filtered basis from elementary ladder action,
/// never using the invariant-subspace formulas. Symmetry is verified to
/// 1e-14 of the matrix scale after assembly.
inline Eigen::MatrixXd build_full_hamiltonian(const ModelParams& params, const FockSpace& space) {
  std::map<OccupationState, std::size_t> index;
  for (std::size_t i = 0; i < space.basis.size(); ++i) index[space.basis[i]] = i;

  const auto dim = static_cast<Eigen::Index>(space.basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  for (std::size_t col = 0; col < space.basis.size(); ++col) {
    const OccupationState& state = space.basis[col];
    double diag = params.omega_e * state.n_e;
    for (std::size_t j = 0; j < params.modes.size(); ++j) {
      diag += params.modes[j].omega * state.reservoir[j];
    }
    h(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = diag;

    for (std::size_t j = 0; j < params.modes.size(); ++j) {
      const double d = params.modes[j].d;
      if (d == 0.0) continue;
      // a_j b_e^dag b_g |state>
      if (state.n_g >= 1 && state.reservoir[j] >= 1) {
        OccupationState target = state;
        target.n_g -= 1;
        target.n_e += 1;
        target.reservoir[j] -= 1;
        const double amp = d * std::sqrt(static_cast<double>(state.reservoir[j])) *
                           std::sqrt(static_cast<double>(state.n_e + 1)) *
                           std::sqrt(static_cast<double>(state.n_g));
        h(static_cast<Eigen::Index>(index.at(target)), static_cast<Eigen::Index>(col)) += amp;
      }
      // a_j^dag b_g^dag b_e |state>
      if (state.n_e >= 1) {
        OccupationState target = state;
        target.n_g += 1;
        target.n_e -= 1;
        target.reservoir[j] += 1;
        const double amp = d * std::sqrt(static_cast<double>(state.reservoir[j] + 1)) *
                           std::sqrt(static_cast<double>(state.n_g + 1)) *
                           std::sqrt(static_cast<double>(state.n_e));
        h(static_cast<Eigen::Index>(index.at(target)), static_cast<Eigen::Index>(col)) += amp;
      }
    }
  }

  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14 * scale) {
    throw std::runtime_error("build_full_hamiltonian: assembled matrix is not symmetric");
  }
  return h;
}

/// Full-space amplitudes <basis_m|U(T)|initial> over the filtered sector.
struct OraclePropagation {
  FockSpace space;
  std::vector<double> times;
  std::size_t initial_index = 0;
  Eigen::MatrixXcd amplitudes;  // rows: times, cols: sector basis
};

inline OraclePropagation oracle_propagate(const ModelParams& params,
                                          const OccupationState& initial,
                                          const std::vector<double>& times,
                                          std::size_t max_states = 20000) {
  OraclePropagation result;
  result.space = enumerate_sector(params, initial, max_states);
  result.times = times;

  const auto it = std::find(result.space.basis.begin(), result.space.basis.end(), initial);
  if (it == result.space.basis.end()) {
    throw std::logic_error("oracle_propagate: initial state missing from its own sector");
  }
  result.initial_index = static_cast<std::size_t>(it - result.space.basis.begin());

  const Eigen::MatrixXd h = build_full_hamiltonian(params, result.space);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("oracle_propagate: eigensolver failed");
  }
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const Eigen::VectorXd& values = solver.eigenvalues();
  const auto dim = static_cast<Eigen::Index>(result.space.dimension());

  result.amplitudes.setZero(static_cast<Eigen::Index>(times.size()), dim);
  const Eigen::VectorXd init_components =
      vectors.row(static_cast<Eigen::Index>(result.initial_index));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t == 0.0) {
      result.amplitudes(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(result.initial_index)) = 1.0;
      continue;
    }
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      phases(k) = std::polar(init_components(k), -values(k) * t);
    }
    result.amplitudes.row(static_cast<Eigen::Index>(i)) = (vectors * phases).transpose();
  }
  return result;
}

/// |<initial|U(T)|initial>|^2 from the brute-force sector propagation.
inline DecoherenceCurve oracle_factor(const ModelParams& params, const OccupationState& initial,
                                      const std::vector<double>& times,
                                      std::size_t max_states = 20000) {
  const OraclePropagation propagation = oracle_propagate(params, initial, times, max_states);

  DecoherenceCurve curve;
  curve.times = times;
  curve.method = CurveMethod::Evolution;
  {
    std::ostringstream digest;
    digest << "oracle dim=" << propagation.space.dimension()
           << " init=" << to_string(initial);
    curve.params_digest = digest.str();
  }
  curve.factor.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    curve.factor[i] = std::norm(propagation.amplitudes(
        static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(propagation.initial_index)));
  }
  return curve;
}

/// <psi(T)| n_e + sum_j n_j |psi(T)> for a propagated row; conserved under H.
inline double excitation_expectation(const OraclePropagation& propagation, std::size_t time_index) {
  double expectation = 0.0;
  for (std::size_t m = 0; m < propagation.space.dimension(); ++m) {
    const double population = std::norm(propagation.amplitudes(
        static_cast<Eigen::Index>(time_index), static_cast<Eigen::Index>(m)));
    expectation += population * propagation.space.basis[m].excitation_number();
  }
  return expectation;
}

/// Occupation tuple of a subspace basis label, for subspace/oracle comparisons.
inline OccupationState occupation_of(const BasisLabel& label, long photon_number,
                                     std::size_t n_modes) {
  if (const auto* single = std::get_if<SingleModeLabel>(&label)) {
    const int k = single->offset;
    OccupationState state;
    state.n_g = 1 + k;
    state.n_e = 1 - k;
    state.reservoir = {static_cast<int>(photon_number) + k};
    return state;
  }
  OccupationState state;
  state.reservoir.assign(n_modes, 0);
  if (const auto* one = std::get_if<OneQuantumLabel>(&label)) {
    state.n_g = 2;
    state.n_e = 0;
    state.reservoir.at(one->mode) = 1;
  } else {
    state.n_g = 1;
    state.n_e = 1;
  }
  return state;
}

}  // namespace soqd
