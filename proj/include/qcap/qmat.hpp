#pragma once

// Dense complex linear algebra used throughout the library.
//
// Subsystem ordering convention: a composite index over factors with
// dimensions (d_0, d_1, ..., d_{n-1}) is row-major, i.e. factor 0 is the most
// significant digit:  idx = ((i_0 * d_1 + i_1) * d_2 + i_2) ...
// tensor_product(a, b) therefore puts a's index in the major position.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest row or column count any operation here will produce.
inline constexpr Index kMaxDimension = 4096;

/// Default tolerance for validating density matrices.
inline constexpr double kStateTolerance = 1e-9;

/// Eigenvalues below this contribute nothing to the von Neumann entropy.
inline constexpr double kEntropyClip = 1e-12;

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced matrix on the subsystems listed in `keep` (kept in their original
/// order, duplicates rejected). `dims` must multiply to the matrix size.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

/// Transpose on tensor factor `subsystem` only. Involutive, bit-exact.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims,
                                int subsystem);

/// Entrywise complex conjugate in the computational basis.
ComplexMatrix conjugate(const ComplexMatrix& m);

/// max |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Throws ValidationError naming `what` if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

struct Eigensystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, matching `values`
};

/// Eigendecomposition of a Hermitian matrix. The input is checked against
/// `tol` (scaled by max(1, max|m_ij|)) and symmetrized before solving.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m, double tol = 1e-9);

/// Eigenvalues only, descending.
RealVector hermitian_eigenvalues(const ComplexMatrix& m, double tol = 1e-9);

double min_eigenvalue(const ComplexMatrix& m, double tol = 1e-9);

/// -sum l log2 l over entries above `clip`. Accepts sub-normalized spectra.
double entropy_of_spectrum(const RealVector& eigenvalues, double clip = kEntropyClip);

/// A validated quantum state: Hermitian, unit trace and PSD, all within tol.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tol = kStateTolerance);

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix pure(const ComplexVector& psi, double tol = kStateTolerance);

  const ComplexMatrix& matrix() const { return mat_; }
  Index dim() const { return mat_.rows(); }
  double tolerance() const { return tol_; }

 private:
  ComplexMatrix mat_;
  double tol_;
};

/// Entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

ComplexMatrix identity(Index dim);

/// Normalized |psi><psi| without validation.
ComplexMatrix projector(const ComplexVector& psi);

}  // namespace qcap
