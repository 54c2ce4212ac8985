#pragma once

// Coherent information and its single-letter maximization.

#include <cstdint>

#include "qcap/channels.hpp"
#include "qcap/qmat.hpp"

namespace qcap {

/// I_c(N, rho) = H(B) - H(E) for tau = U rho U^dagger, in bits.
double coherent_information(const StinespringIsometry& iso, const DensityMatrix& rho);
double coherent_information(const KrausChannel& ch, const DensityMatrix& rho);

struct MaximizeOptions {
  /// Caller asserts irreducible unitary covariance: the maximum sits at the
  /// maximally mixed input and a single evaluation is returned.
  bool covariant = false;
  /// Simplex-size stopping tolerance is sqrt(tol); value accuracy ~ tol.
  double tol = 1e-8;
  int max_evals = 10000;
  int restarts = 20;
  std::uint64_t seed = 20090917;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct CoherentInfoResult {
  double value;
  DensityMatrix argmax_state;
  int iterations;  // objective evaluations summed over restarts
  bool converged;  // every restart met the tolerance within max_evals
};

/// Maximizes I_c over input states. The non-covariant path parametrizes
/// rho = L L^dagger / Tr(L L^dagger) with L complex lower triangular and runs
/// Nelder-Mead from the maximally mixed state plus random restarts.
CoherentInfoResult maximize_coherent_information(const StinespringIsometry& iso,
                                                 const MaximizeOptions& options = {});

struct SubadditivityResult {
  double two_copy;  // I_c(N (x) N, rho12)
  double split;     // I_c(N, rho1) + I_c(N, rho2)
};

/// Evaluates both sides of I_c(N (x) N, rho12) <= I_c(N, rho1) + I_c(N, rho2).
SubadditivityResult subadditivity_check(const KrausChannel& ch, const DensityMatrix& rho12);

/// rho(theta) for the lower-triangular parametrization; exposed for tests.
DensityMatrix state_from_parameters(const double* theta, Index dim);
Index num_state_parameters(Index dim);

}  // namespace qcap
