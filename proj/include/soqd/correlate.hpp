#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "soqd/model.hpp"

namespace soqd {

/// Diagonal two-atom reduced density over the ordered basis
/// {|0_g,2_e>, |1_g,1_e>, |2_g,0_e>}. Off-diagonal entries vanish for every
/// state produced by the interaction (each component is entangled with a
/// distinct orthogonal reservoir Fock state), so only weights are carried.
struct TwoAtomState {
  double p_upper = 0.0;  // |0_g,2_e>
  double p_mid = 1.0;    // |1_g,1_e>
  double p_lower = 0.0;  // |2_g,0_e>
};

inline void validate_state(const TwoAtomState& state) {
  const double sum = state.p_upper + state.p_mid + state.p_lower;
  if (state.p_upper < -1e-12 || state.p_mid < -1e-12 || state.p_lower < -1e-12 ||
      std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("TwoAtomState: weights must be nonnegative and sum to 1");
  }
}

struct CorrelationGrid {
  std::vector<double> t_values;
  std::vector<double> tprime_values;
  Eigen::MatrixXd g;  // g(i, j) = G(t_values[i], tprime_values[j])
};

namespace detail {

// Two-particle sector of the two atomic modes, ordered {|0g,2e>, |1g,1e>, |2g,0e>};
// one-particle sector {|0g,1e>, |1g,0e>}; applying the measured-mode operator
// B = c1 b_g + c2 e^{-i omega_e t} b_e steps one sector down by ladder algebra.
inline Eigen::Matrix<complex, 2, 3> measurement_two_to_one(const MeasurementCoeffs& coeffs,
                                                           double omega_e, double t) {
  const complex cg = coeffs.c1;
  const complex ce = coeffs.c2 * std::polar(1.0, -omega_e * t);
  Eigen::Matrix<complex, 2, 3> b;
  b.setZero();
  const double sqrt2 = std::sqrt(2.0);
  // b_g: |n_g,n_e> -> sqrt(n_g)|n_g-1,n_e>;  b_e: -> sqrt(n_e)|n_g,n_e-1>.
  b(0, 0) = ce * sqrt2;  // b_e |0g,2e> = sqrt2 |0g,1e>
  b(0, 1) = cg;          // b_g |1g,1e> = |0g,1e>
  b(1, 1) = ce;          // b_e |1g,1e> = |1g,0e>
  b(1, 2) = cg * sqrt2;  // b_g |2g,0e> = sqrt2 |1g,0e>
  return b;
}

inline Eigen::Matrix<complex, 1, 2> measurement_one_to_zero(const MeasurementCoeffs& coeffs,
                                                            double omega_e, double t) {
  const complex cg = coeffs.c1;
  const complex ce = coeffs.c2 * std::polar(1.0, -omega_e * t);
  Eigen::Matrix<complex, 1, 2> b;
  b(0, 0) = ce;  // b_e |0g,1e> = |0,0>
  b(0, 1) = cg;  // b_g |1g,0e> = |0,0>
  return b;
}

}  // namespace detail

/// G(t, t') = Tr_S(rho_S B^dag(t) B^dag(t') B(t') B(t)) evaluated exactly in
/// the three-dimensional two-atom space by ladder algebra, for arbitrary
/// measurement coefficients.
inline double g2_first_principles(const TwoAtomState& state, const MeasurementCoeffs& coeffs,
                                  double omega_e, double t, double tprime) {
  validate_state(state);
  const auto b_first = detail::measurement_two_to_one(coeffs, omega_e, t);
  const auto b_second = detail::measurement_one_to_zero(coeffs, omega_e, tprime);
  const Eigen::Matrix<complex, 1, 3> chain = b_second * b_first;

  const std::array<double, 3> weights{state.p_upper, state.p_mid, state.p_lower};
  double g = 0.0;
  for (int s = 0; s < 3; ++s) {
    g += weights[static_cast<std::size_t>(s)] * std::norm(chain(0, s));
  }
  return g;
}

/// Compact balanced-measurement form G = (1 + p_mid cos(omega_e (t - t')))/2,
/// with p_mid the |1_g,1_e> weight (the decoherence factor after evolution).
inline double g2_compact(double p_mid, double omega_e, double t, double tprime) {
  if (!(p_mid >= -1e-10 && p_mid <= 1.0 + 1e-10)) {
    throw std::invalid_argument("g2_compact: p_mid must lie in [0, 1]");
  }
  return 0.5 * (1.0 + p_mid * std::cos(omega_e * (t - tprime)));
}

inline CorrelationGrid g2_grid(const TwoAtomState& state, const MeasurementCoeffs& coeffs,
                               double omega_e, const std::vector<double>& t_values,
                               const std::vector<double>& tprime_values) {
  if (t_values.empty() || tprime_values.empty()) {
    throw std::invalid_argument("g2_grid: grids must be nonempty");
  }
  CorrelationGrid grid;
  grid.t_values = t_values;
  grid.tprime_values = tprime_values;
  grid.g.resize(static_cast<Eigen::Index>(t_values.size()),
                static_cast<Eigen::Index>(tprime_values.size()));
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    for (std::size_t j = 0; j < tprime_values.size(); ++j) {
      grid.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          g2_first_principles(state, coeffs, omega_e, t_values[i], tprime_values[j]);
    }
  }
  return grid;
}

}  // namespace soqd
