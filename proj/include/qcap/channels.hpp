#pragma once

// Channel representations and the conversions between them.
//
// Conventions (fixed once, used everywhere):
//  * Choi matrix R = (N (x) id)(Phi) with the unnormalized |Phi> = sum_i |ii>.
//    The output factor is first, the input reference second:
//        R[(b*din + a), (b'*din + a')] = <b| N(|a><a'|) |b'>,
//    so Tr R = din and Tr_out R = I_din for a trace-preserving map.
//  * Stinespring isometry U : A -> B (x) E with B major, E minor:
//        U[(b*denv + k), a] = <b|E_k|a>,  U|psi> = sum_k E_k|psi> (x) |k>.
//  * Transfer matrix (the Gamma reshuffle of R) acts on row-major vec:
//        T[(b*dout + b'), (a*din + a')] = R[(b*din + a), (b'*din + a')],
//    vec(N(X)) = T vec(X) and T_{M o N} = T_M T_N.

#include <array>
#include <vector>

#include "qcap/qmat.hpp"

namespace qcap {

inline constexpr double kCompletenessTolerance = 1e-10;
inline constexpr double kChoiRankThreshold = 1e-9;
inline constexpr double kKrausDropThreshold = 1e-10;
inline constexpr double kNotCpThreshold = 1e-8;

class KrausChannel {
 public:
  /// Validates shapes and completeness sum E_k^dagger E_k = I within `tol`.
  KrausChannel(Index din, Index dout, std::vector<ComplexMatrix> ops,
               double tol = kCompletenessTolerance);

  Index din() const { return din_; }
  Index dout() const { return dout_; }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }
  Index num_kraus() const { return static_cast<Index>(ops_.size()); }

  /// max |sum E_k^dagger E_k - I|.
  double completeness_defect() const;

 private:
  Index din_;
  Index dout_;
  std::vector<ComplexMatrix> ops_;
};

/// Jamiolkowski matrix of a Hermiticity-preserving map. Only shape and
/// Hermiticity are enforced on construction; complete positivity and trace
/// preservation are queried, because candidate degrading maps need not be CP.
class ChoiMatrix {
 public:
  ChoiMatrix(Index din, Index dout, ComplexMatrix mat);

  Index din() const { return din_; }
  Index dout() const { return dout_; }
  const ComplexMatrix& matrix() const { return mat_; }

  RealVector eigenvalues() const;
  double min_eigenvalue() const;
  /// max |Tr_out R - I_din|.
  double trace_preservation_defect() const;
  bool is_completely_positive(double tol = kNotCpThreshold) const;

 private:
  Index din_;
  Index dout_;
  ComplexMatrix mat_;
};

class StinespringIsometry {
 public:
  /// Validates U^dagger U = I_din within `tol`.
  StinespringIsometry(Index din, Index dout, Index denv, ComplexMatrix u,
                      double tol = kCompletenessTolerance);

  Index din() const { return din_; }
  Index dout() const { return dout_; }
  Index denv() const { return denv_; }
  const ComplexMatrix& matrix() const { return u_; }

 private:
  Index din_;
  Index dout_;
  Index denv_;
  ComplexMatrix u_;
};

KrausChannel identity_channel(Index dim);

/// rho -> (1 - p) rho + p Tr(rho) I/d.
KrausChannel depolarizing_channel(Index dim, double p);

/// rho -> Tr(rho) |phi><phi|.
KrausChannel constant_channel(Index din, const ComplexVector& phi);

ChoiMatrix kraus_to_choi(const KrausChannel& ch);

/// Kraus operators from the eigendecomposition of R; eigenvalues below
/// `drop` are discarded. Throws NotCompletelyPositiveError when R has an
/// eigenvalue below -kNotCpThreshold.
KrausChannel choi_to_kraus(const ChoiMatrix& c, double drop = kKrausDropThreshold);

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch);
KrausChannel stinespring_to_kraus(const StinespringIsometry& iso);

/// Linear action on an arbitrary din x din operator.
ComplexMatrix apply_to_operator(const KrausChannel& ch, const ComplexMatrix& x);
ComplexMatrix apply_to_operator(const ChoiMatrix& c, const ComplexMatrix& x);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
DensityMatrix apply(const StinespringIsometry& iso, const DensityMatrix& rho);
DensityMatrix apply(const ChoiMatrix& c, const DensityMatrix& rho);

/// U rho U^dagger on B (x) E.
ComplexMatrix joint_output(const StinespringIsometry& iso, const ComplexMatrix& rho);

/// The channel to the environment, rho -> Tr_B(U rho U^dagger).
KrausChannel complementary(const StinespringIsometry& iso);
KrausChannel complementary(const KrausChannel& ch);

/// second o first.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

/// first (x) second acting on A1 A2 with output B1 B2; environment E1 E2.
KrausChannel tensor(const KrausChannel& first, const KrausChannel& second);

/// p * a + (1 - p) * b as a Kraus set (environments stacked).
KrausChannel convex_mixture(const KrausChannel& a, const KrausChannel& b, double p);

/// rho -> V N(W rho W^dagger) V^dagger.
KrausChannel conjugate_by_unitaries(const KrausChannel& ch, const ComplexMatrix& input_unitary,
                                    const ComplexMatrix& output_unitary);

/// Swap the second row factor with the first column factor:
///   out[(r1, c1), (r2, c2)] = m[(r1, r2), (c1, c2)].
/// With (row_dims, col_dims) -> ({r1, c1}, {r2, c2}) the operation is its own
/// inverse, bit-exactly.
ComplexMatrix gamma_reshuffle(const ComplexMatrix& m, const std::array<int, 2>& row_dims,
                              const std::array<int, 2>& col_dims);

/// Transfer matrix (dout^2 x din^2) of the map with Choi matrix `r`.
ComplexMatrix gamma_involution(const ChoiMatrix& r);

/// Inverse of gamma_involution.
ChoiMatrix choi_from_transfer(const ComplexMatrix& transfer, Index din, Index dout);

ComplexMatrix transfer_matrix(const KrausChannel& ch);

Index choi_rank(const ChoiMatrix& c, double threshold = kChoiRankThreshold);
Index choi_rank(const KrausChannel& ch, double threshold = kChoiRankThreshold);

}  // namespace qcap
