// Links the decoherence factor to the observable fringe contrast: evolve a
// single-mode Fock reservoir, then evaluate the two-time correlation at the
// resulting mixed state. The fringe visibility equals the factor.

#include <cstdio>

#include "soqd/soqd.hpp"

int main() {
  using namespace soqd;

  ModelParams params;
  params.omega_e = 1.0;
  params.modes = {{1.2, 0.07}};
  const SubspaceSystem system = build_single_mode(params, 2);

  for (double interaction_time : {0.0, 5.0, 10.0, 15.0}) {
    const ReducedDensityWeights weights = reduced_density(system, interaction_time);
    const TwoAtomState state{weights.p_upper, weights.p_mid, weights.p_lower};

    double lo = 1.0, hi = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double dt = 2.0 * std::numbers::pi * i / 400.0;
      const double g = g2_first_principles(state, params.measurement, params.omega_e, dt, 0.0);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    std::printf("T = %5.1f  p_mid = %.4f  fringe visibility = %.4f\n", interaction_time,
                weights.p_mid, (hi - lo) / (hi + lo));
  }
  return 0;
}
