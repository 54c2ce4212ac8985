#pragma once

// Gisin-Massar N -> M universal qubit cloning machines.
//
// Input: the (N+1)-dimensional symmetric subspace of N qubits in the
// completely-symmetric-state (CSS) basis |N-k:0, k:1>, k = 0..N.
// Output: the (M+1)-dimensional CSS space of M qubits, same labelling.
// Environment: an abstract orthonormal basis |P_j>, j = 0..M-N.
//
// The coefficient formulas are templates so that they can be evaluated in
// exact rational arithmetic as well as in double.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/errors.hpp"
#include "qcap/qmat.hpp"

namespace qcap {

/// Largest M accepted by the cloner constructors.
inline constexpr int kMaxClonerOutputs = 200;

struct ClonerSpec {
  int n_in;
  int m_out;

  /// Throws ValidationError unless 1 <= N <= M; ResourceError above the cap.
  void validate(int max_outputs = kMaxClonerOutputs) const;
  int env_dim() const { return m_out - n_in + 1; }
};

template <class T>
T binomial(int n, int k) {
  if (k < 0 || k > n) return T(0);
  k = std::min(k, n - k);
  T out(1);
  for (int i = 1; i <= k; ++i) out = out * T(n - k + i) / T(i);
  return out;
}

/// alpha_j(N, M) = ((N+1)/(M+1)) prod_{i<j} (M-N-i)/(M-i), j = 0..M-N.
template <class T>
T alpha_j(const ClonerSpec& spec, int j) {
  const int n = spec.n_in, m = spec.m_out;
  if (j < 0 || j > m - n) throw ValidationError("alpha_j: index out of range");
  T out = T(n + 1) / T(m + 1);
  for (int i = 0; i < j; ++i) out = out * T(m - n - i) / T(m - i);
  return out;
}

/// alpha_kj = ((N+1)/(M+1)) C(N,k) C(M-N,j) / C(M,k+j): probability weight of
/// |M-k-j:0, k+j:1>_B |P_j>_E given input |N-k:0, k:1>.
template <class T>
T alpha_kj(const ClonerSpec& spec, int k, int j) {
  const int n = spec.n_in, m = spec.m_out;
  if (k < 0 || k > n || j < 0 || j > m - n) throw ValidationError("alpha_kj: index out of range");
  return T(n + 1) / T(m + 1) * binomial<T>(n, k) * binomial<T>(m - n, j) / binomial<T>(m, k + j);
}

/// Same weight from the factorial expression of the Stinespring amplitudes,
/// squared; evaluated through lgamma and used as a cross-check.
double alpha_kj_factorial_form(const ClonerSpec& spec, int k, int j);

/// beta_j = alpha_j (M-j)/M + alpha_{j+1} (1+j)/M with alpha_{M-N+1} = 0:
/// diagonal of the B state after tracing out one clone, input |0...0>.
template <class T>
std::vector<T> beta_coefficients(const ClonerSpec& spec) {
  const int n = spec.n_in, m = spec.m_out;
  std::vector<T> beta(m - n + 1);
  for (int j = 0; j <= m - n; ++j) {
    const T next = (j + 1 <= m - n) ? alpha_j<T>(spec, j + 1) : T(0);
    beta[j] = alpha_j<T>(spec, j) * T(m - j) / T(m) + next * T(1 + j) / T(m);
  }
  return beta;
}

template <class T>
std::vector<T> alpha_coefficients(const ClonerSpec& spec) {
  std::vector<T> alpha(spec.m_out - spec.n_in + 1);
  for (int j = 0; j < static_cast<int>(alpha.size()); ++j) alpha[j] = alpha_j<T>(spec, j);
  return alpha;
}

/// Eigenvalues of the 1 -> M output with one clone traced out, input |0>:
/// (M^2 + M - 1 - j(2+M)) / (M tri_M), j = 0..M-1, tri_M = M(M+1)/2.
template <class T>
std::vector<T> traced_b_eigenvalues(int m) {
  if (m < 2) throw ValidationError("traced_b_eigenvalues: M must be at least 2");
  const T tri = T(m * (m + 1)) / T(2);
  std::vector<T> out(m);
  for (int j = 0; j < m; ++j) out[j] = T(m * m + m - 1 - j * (2 + m)) / (T(m) * tri);
  return out;
}

/// beta majorizes alpha: descending prefix sums of beta dominate those of
/// alpha, with `slack` allowed per prefix.
template <class T>
bool majorizes(std::vector<T> beta, std::vector<T> alpha, const T& slack) {
  if (beta.size() != alpha.size()) throw DimensionError("majorizes: length mismatch");
  std::sort(beta.begin(), beta.end(), [](const T& a, const T& b) { return a > b; });
  std::sort(alpha.begin(), alpha.end(), [](const T& a, const T& b) { return a > b; });
  T sb(0), sa(0);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    sb += beta[i];
    sa += alpha[i];
    if (sb + slack < sa) return false;
  }
  return true;
}

bool majorizes(const std::vector<double>& beta, const std::vector<double>& alpha, double slack = 1e-12);

/// sum_k C(k+j, k) C(M-k-j, N-k) in exact integer arithmetic. Throws
/// ResourceError on 64-bit overflow.
std::uint64_t css_binomial_sum(int n, int m, int j);
std::uint64_t binomial_u64(int n, int k);

/// Stinespring dilation: din = N+1, dout = M+1, denv = M-N+1.
/// Both coefficient formulas are evaluated and must agree to 1e-10 (relative).
StinespringIsometry build_cloner_isometry(const ClonerSpec& spec);
KrausChannel cloner_channel(const ClonerSpec& spec);

/// Isometry CSS(n) -> C^2 (x) CSS(n-1), splitting off the first qubit:
/// |n-j:0, j:1> = sqrt((n-j)/n) |0>|n-1-j:0, j:1> + sqrt(j/n) |1>|n-j:0, j-1:1>.
ComplexMatrix css_split_isometry(int n);

/// Embedding CSS(n) -> (C^2)^{(x) n} (2^n x (n+1)), qubit 0 most significant.
ComplexMatrix css_embedding(int n);

/// |psi>^{(x) n} in the CSS(n) basis.
ComplexVector symmetric_product_state(int n, const ComplexVector& psi);

/// Operator on CSS(n) -> operator on CSS(n-1) with one qubit traced out.
ComplexMatrix trace_one_qubit(const ComplexMatrix& rho_css);

/// Operator on CSS(n) -> single-qubit marginal.
ComplexMatrix single_qubit_marginal(const ComplexMatrix& rho_css);

/// Reduced state of one clone for input |psi>^{(x) N}.
DensityMatrix clone_marginal(const ClonerSpec& spec, const ComplexVector& psi);

/// Reduced state of the environment for input |psi>^{(x) N}.
DensityMatrix cloner_environment(const ClonerSpec& spec, const ComplexVector& psi);

struct ShrinkFactors {
  double eta;      // clone Bloch shrink, N/(N+1) * (N+3)/(N+2)
  double upsilon;  // environment Bloch shrink, N/(N+2)
};

/// Only defined for M = N+1 (ValidationError otherwise).
ShrinkFactors environment_shrink_factors(const ClonerSpec& spec);

struct OneToMCoefficients {
  double a;  // J_z slope of the environment state, 1/tri_M
  double b;  // J_z slope with one clone traced out, (M+2)/(M tri_M)
};

OneToMCoefficients one_to_m_degrading_coefficients(int m);

/// log2((M+1)/(M-N+1)).
double cloner_capacity_closed_form(const ClonerSpec& spec);

struct DegradingMapSpectrum {
  ComplexMatrix choi;      // output B1 (2) x references B1'B2' (4), Tr = 1
  RealVector eigenvalues;  // descending
  double min_eigenvalue;
  Index rank;              // eigenvalues above 1e-9
};

/// Jamiolkowski test of Tr_{B2} o UNOT o S_shrink o P+ on the normalized
/// state |Phi> = (1/2)(|00> + |11>)_{B1B1'} (|00> + |11>)_{B2B2'}, where S
/// shrinks the Bloch vector of B1 by `shrink` and UNOT negates it. The map is
/// CP exactly when shrink >= 2.
DegradingMapSpectrum degrading_map_1to2(double shrink);

/// D with D o Cl = C o Cl^c for the 1 -> 2 cloner, on the CSS(2) output:
/// trace out one clone, then depolarize the Bloch vector by a factor 2.
/// The conjugation lives on the environment side of the identity.
KrausChannel conjugate_degrading_map_1to2();

}  // namespace qcap
