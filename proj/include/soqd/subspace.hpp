#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "soqd/model.hpp"

namespace soqd {

/// |N+k) in the single-mode ladder: k = -1 -> |0_g,2_e,N-1>, k = 0 ->
/// |1_g,1_e,N>, k = +1 -> |2_g,0_e,N+1>.
struct SingleModeLabel {
  int offset = 0;
  friend bool operator==(SingleModeLabel a, SingleModeLabel b) { return a.offset == b.offset; }
};

/// |0) = |1_g,1_e,{0_j}> of the many-mode vacuum sector.
struct VacuumLabel {
  friend bool operator==(VacuumLabel, VacuumLabel) { return true; }
};

/// |1_j) = |2_g,0_e,1_j> with a single quantum in reservoir mode j.
struct OneQuantumLabel {
  std::size_t mode = 0;
  friend bool operator==(OneQuantumLabel a, OneQuantumLabel b) { return a.mode == b.mode; }
};

using BasisLabel = std::variant<SingleModeLabel, VacuumLabel, OneQuantumLabel>;

inline std::string to_string(const BasisLabel& label) {
  struct Visitor {
    std::string operator()(SingleModeLabel l) const {
      if (l.offset == 0) return "|N)";
      return l.offset > 0 ? "|N+" + std::to_string(l.offset) + ")"
                          : "|N" + std::to_string(l.offset) + ")";
    }
    std::string operator()(VacuumLabel) const { return "|0)"; }
    std::string operator()(OneQuantumLabel l) const {
      return "|1_" + std::to_string(l.mode) + ")";
    }
  };
  return std::visit(Visitor{}, label);
}

/// An invariant subspace: ordered basis labels plus the dense Hamiltonian
/// restricted to them. All entries are real under this module's conventions
/// (couplings real), so the matrix is stored real symmetric.
struct SubspaceSystem {
  std::vector<BasisLabel> basis;
  Eigen::MatrixXd hamiltonian;
  std::optional<long> photon_number;  // N, single-mode case only

  std::size_t dimension() const { return basis.size(); }
};

inline std::optional<std::size_t> find_label(const SubspaceSystem& system,
                                             const BasisLabel& label) {
  for (std::size_t i = 0; i < system.basis.size(); ++i) {
    if (system.basis[i] == label) return i;
  }
  return std::nullopt;
}

/// Single-mode invariant subspace around reservoir occupation N.
///
/// Basis order is fixed as [|N-1), |N), |N+1)] (N >= 1) or [|0), |+1)]
/// (N = 0, where no |N-1) state exists). Matrix elements come from ladder
/// algebra: diagonal (1-k)*omega_e + (N+k)*omega_j, couplings d*sqrt(2N)
/// and d*sqrt(2(N+1)) to the lower/upper neighbor.
inline SubspaceSystem build_single_mode(const ModelParams& params, long photon_number) {
  if (params.modes.size() != 1) {
    throw std::invalid_argument("build_single_mode: exactly one reservoir mode required, got " +
                                std::to_string(params.modes.size()));
  }
  if (photon_number < 0) {
    throw std::invalid_argument("build_single_mode: N must be >= 0");
  }
  const double omega_e = params.omega_e;
  const double omega_j = params.modes[0].omega;
  const double d = params.modes[0].d;
  const double n = static_cast<double>(photon_number);

  SubspaceSystem system;
  system.photon_number = photon_number;

  auto diagonal = [&](int k) {
    return (1.0 - k) * omega_e + (n + k) * omega_j;
  };

  if (photon_number == 0) {
    system.basis = {BasisLabel{SingleModeLabel{0}}, BasisLabel{SingleModeLabel{1}}};
    system.hamiltonian.setZero(2, 2);
    system.hamiltonian(0, 0) = diagonal(0);
    system.hamiltonian(1, 1) = diagonal(1);
    const double g_up = d * std::sqrt(2.0 * (n + 1.0));
    system.hamiltonian(0, 1) = g_up;
    system.hamiltonian(1, 0) = g_up;
    return system;
  }

  system.basis = {BasisLabel{SingleModeLabel{-1}}, BasisLabel{SingleModeLabel{0}},
                  BasisLabel{SingleModeLabel{1}}};
  system.hamiltonian.setZero(3, 3);
  system.hamiltonian(0, 0) = diagonal(-1);
  system.hamiltonian(1, 1) = diagonal(0);
  system.hamiltonian(2, 2) = diagonal(1);
  const double g_down = d * std::sqrt(2.0 * n);
  const double g_up = d * std::sqrt(2.0 * (n + 1.0));
  system.hamiltonian(0, 1) = g_down;
  system.hamiltonian(1, 0) = g_down;
  system.hamiltonian(1, 2) = g_up;
  system.hamiltonian(2, 1) = g_up;
  // <N-1|H|N+1> = 0: the interaction moves one reservoir quantum at a time.
  return system;
}

/// Many-mode vacuum-sector subspace, basis [|0), |1_1), ..., |1_M)].
/// Diagonal [omega_e, omega_1, ..., omega_M]; <1_j|H|0> = d_j*sqrt(2).
inline SubspaceSystem build_multi_mode(const ModelParams& params) {
  if (params.modes.empty()) {
    throw std::invalid_argument("build_multi_mode: at least one reservoir mode required");
  }
  const auto m = params.modes.size();

  SubspaceSystem system;
  system.basis.reserve(m + 1);
  system.basis.push_back(BasisLabel{VacuumLabel{}});
  for (std::size_t j = 0; j < m; ++j) {
    system.basis.push_back(BasisLabel{OneQuantumLabel{j}});
  }

  system.hamiltonian.setZero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(m + 1));
  system.hamiltonian(0, 0) = params.omega_e;
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto row = static_cast<Eigen::Index>(j + 1);
    system.hamiltonian(row, row) = params.modes[j].omega;
    const double g = params.modes[j].d * sqrt2;
    system.hamiltonian(0, row) = g;
    system.hamiltonian(row, 0) = g;
  }
  return system;
}

}  // namespace soqd
