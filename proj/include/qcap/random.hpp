#pragma once

// Seeded random objects for restarts and property tests.

#include <cstdint>
#include <random>

#include "qcap/channels.hpp"
#include "qcap/qmat.hpp"

namespace qcap {

using Rng = std::mt19937_64;

/// Complex Ginibre matrix with standard normal real and imaginary parts.
ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng);

/// Haar-random unitary via QR with phase correction.
ComplexMatrix random_unitary(Index dim, Rng& rng);

/// Haar-random isometry (rows >= cols).
ComplexMatrix random_isometry(Index rows, Index cols, Rng& rng);

ComplexVector random_pure_state(Index dim, Rng& rng);

/// Hilbert-Schmidt random density matrix of the given rank (full rank if 0).
DensityMatrix random_density_matrix(Index dim, Rng& rng, Index rank = 0);

/// Random CPTP map with `num_kraus` Kraus operators from a random isometry.
KrausChannel random_channel(Index din, Index dout, Index num_kraus, Rng& rng);

}  // namespace qcap
