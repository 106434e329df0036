#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "schur/matrix.hpp"

namespace schur {

/// All sampling in the library draws from this engine so runs are
/// reproducible from the printed seed.
using Rng = std::mt19937_64;

/// Engine for sample stream `stream` under `seed`. Distinct streams are
/// independent, so per-trial work can be derived from (seed, trial).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix random_gaussian(int rows, int cols, Rng& rng);

/// Same, scaled to unit spectral norm.
ComplexMatrix random_unit_gaussian(int rows, int cols, Rng& rng);

/// Uniformly random bijection of {1..n}.
Permutation random_permutation(int n, Rng& rng);

/// Nonzero complex weight with modulus in [0.5, 2] and uniform phase.
Complex random_weight(Rng& rng);

}  // namespace schur
