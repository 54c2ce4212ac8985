#pragma once

// The Unruh channel on a dual-rail qubit. For acceleration parameter
// z in (0, 1) the output is a direct sum over k >= 0 of blocks of dimension
// k + 2 weighted by T_k = (1 - z)^3 z^k; the environment carries blocks of
// dimension k + 1. Capacities are evaluated at the maximally mixed input.

#include <array>
#include <iosfwd>
#include <vector>

#include "qcap/qmat.hpp"

namespace qcap {

struct Su2Generators {
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;  // diag(j, j-1, ..., -j)
};

/// Spin-j generators with j = (dim - 1)/2. Throws ValidationError for dim < 2.
Su2Generators su2_generators(Index dim);

/// exp(-i theta n.J) in dimension `dim`.
ComplexMatrix su2_rotation(Index dim, const std::array<double, 3>& axis, double theta);

struct BlockWeights {
  int k;
  double t_k;        // (1 - z)^3 z^k
  double s_k;        // (k + 1)/2
  double s_tilde_k;  // (k + 2)/2
};

BlockWeights block_weights(double z, int k);

/// (k+1)/2 I + n.J in dimension k + 2; n must be a unit vector within 1e-10.
ComplexMatrix unruh_block(const std::array<double, 3>& n_hat, int k);

/// Upper bound on the series tail sum_{k > k_max} of the capacity terms,
/// using log2((k+2)/(k+1)) <= 1/((k+1) ln 2).
double unruh_tail_bound(double z, int k_max);

/// Smallest K with unruh_tail_bound(z, K) <= tail_tol.
int truncation_k(double z, double tail_tol);

/// (1-z)^3/2 sum_{k=0}^{K} z^k (k+1)(k+2) log2((k+2)/(k+1)).
double unruh_series(double z, int k_max);

struct UnruhCapacity {
  double value;  // bits
  int k_max;
  double tail_bound;
};

/// Throws ValidationError unless 0 < z < 1 and tail_tol > 0.
UnruhCapacity unruh_capacity(double z, double tail_tol = 1e-12);

/// Block-diagonal operator kept as its list of blocks.
struct BlockDiagonal {
  std::vector<ComplexMatrix> blocks;

  Index dim() const;
  double trace() const;
  ComplexMatrix dense() const;
  RealVector eigenvalues() const;  // concatenated, per block descending
};

struct UnruhOutputs {
  BlockDiagonal tau_b;  // block k: T_k S_k I^(k+2)
  BlockDiagonal tau_e;  // block k: T_k S~_k I^(k+1)
};

/// Output and environment states for the maximally mixed input, truncated
/// after block k_max. Block k of tau_b is T_k times the Bloch-sphere average
/// of unruh_block.
UnruhOutputs unruh_outputs_maxmixed(double z, int k_max);

/// H(B) - H(E) computed from the truncated output matrices.
double unruh_capacity_entropy_route(double z, int k_max);

struct UnruhSweepRow {
  double z;
  double q_bits;
};

/// Uniform grid z_i = z_min + i (z_max - z_min)/(steps - 1), steps >= 2.
std::vector<UnruhSweepRow> unruh_sweep(double z_min, double z_max, int steps, double tail_tol = 1e-12);

/// Header "z,Q_bits", then one row per point with 17 significant digits.
void write_unruh_csv(std::ostream& out, const std::vector<UnruhSweepRow>& rows);

}  // namespace qcap
