#pragma once

#include "squeezelab/two_pixel.hpp"

namespace squeezelab {

// Largest pixel size the product-space oracle accepts (2^(2N) amplitudes).
inline constexpr int kMaxOracleAtoms = 3;

// Simulates 2N individual spin-1/2 particles in the full 2^(2N)-dimensional
// product space, starting from all spins down and applying `pipeline` with
// single-spin unitaries and diagonal twisting phases, then returns the same
// statistics as projection_stats. Intended as an independent test oracle.
ProjectionStats brute_force_oracle(int n_atoms, const Pipeline& pipeline);

}  // namespace squeezelab
