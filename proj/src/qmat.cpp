#include "qcap/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

Index product_of(const std::vector<int>& dims) {
  Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    total *= d;
    if (total > kMaxDimension) throw DimensionError("subsystem dimensions exceed the maximum dimension");
  }
  return total;
}

void require_square_with_dims(const ComplexMatrix& m, const std::vector<int>& dims, const char* op) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(op) + ": matrix must be square");
  }
  if (product_of(dims) != m.rows()) {
    std::ostringstream msg;
    msg << op << ": product of subsystem dimensions does not match matrix size " << m.rows();
    throw DimensionError(msg.str());
  }
}

// strides[i] = product of dims after i
std::vector<Index> strides_of(const std::vector<int>& dims) {
  std::vector<Index> strides(dims.size());
  Index s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    strides[i] = s;
    s *= dims[i];
  }
  return strides;
}

// Offsets into the full index space for every multi-index over `which`.
std::vector<Index> offsets_over(const std::vector<int>& dims, const std::vector<Index>& strides,
                                const std::vector<int>& which) {
  std::vector<Index> offsets{0};
  for (int sub : which) {
    std::vector<Index> next;
    next.reserve(offsets.size() * dims[sub]);
    for (Index base : offsets) {
      for (int i = 0; i < dims[sub]; ++i) next.push_back(base + i * strides[sub]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw DimensionError("tensor_product: result exceeds the maximum dimension");
  }
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  require_square_with_dims(m, dims, "partial_trace");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n || kept[k]) throw DimensionError("partial_trace: invalid subsystem index in keep set");
    kept[k] = true;
  }
  std::vector<int> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> traced;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) traced.push_back(i);
  }

  const auto strides = strides_of(dims);
  const auto kept_offsets = offsets_over(dims, strides, keep_sorted);
  const auto traced_offsets = offsets_over(dims, strides, traced);

  const Index d = static_cast<Index>(kept_offsets.size());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      Complex acc{0.0, 0.0};
      for (Index t : traced_offsets) acc += m(kept_offsets[r] + t, kept_offsets[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims, int subsystem) {
  require_square_with_dims(m, dims, "partial_transpose");
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size())) {
    throw DimensionError("partial_transpose: subsystem index out of range");
  }
  const auto strides = strides_of(dims);
  const Index stride = strides[subsystem];
  const Index d = dims[subsystem];
  ComplexMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    const Index di = (i / stride) % d;
    for (Index j = 0; j < m.cols(); ++j) {
      const Index dj = (j / stride) % d;
      out(i - di * stride + dj * stride, j - dj * stride + di * stride) = m(i, j);
    }
  }
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) { return m.conjugate(); }

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": entries must be finite");
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eigensystem: matrix must be square");
  require_finite(m, "hermitian_eigensystem");
  const double scale = m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
  const double defect = hermiticity_defect(m);
  if (defect > tol * scale) {
    std::ostringstream msg;
    msg << "hermitian_eigensystem: matrix is not Hermitian (defect " << defect << ")";
    throw ValidationError(msg.str());
  }
  const Index n = m.rows();

  // Diagonal input: skip the tridiagonalization.
  bool diagonal = true;
  for (Index j = 0; j < n && diagonal; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) {
        diagonal = false;
        break;
      }
    }
  }
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  Eigensystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix::Zero(n, n);
  if (diagonal) {
    RealVector diag = m.diagonal().real();
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return diag(a) > diag(b); });
    for (Index i = 0; i < n; ++i) {
      out.values(i) = diag(order[i]);
      out.vectors(order[i], i) = 1.0;
    }
    return out;
  }

  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw ValidationError("hermitian_eigensystem: solver failed");
  // Eigen returns ascending order.
  for (Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eigenvalues: matrix must be square");
  require_finite(m, "hermitian_eigenvalues");
  const double scale = m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
  if (hermiticity_defect(m) > tol * scale) {
    throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  RealVector values = solver.eigenvalues().reverse();
  return values;
}

double min_eigenvalue(const ComplexMatrix& m, double tol) {
  const RealVector values = hermitian_eigenvalues(m, tol);
  return values.size() ? values(values.size() - 1) : 0.0;
}

double entropy_of_spectrum(const RealVector& eigenvalues, double clip) {
  double h = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > clip) h -= l * std::log2(l);
  }
  return h;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : mat_(std::move(m)), tol_(tol) {
  if (tol_ < 0.0) throw ValidationError("DensityMatrix: tolerance must be nonnegative");
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw DimensionError("DensityMatrix: matrix must be square and nonempty");
  }
  if (mat_.rows() > kMaxDimension) throw DimensionError("DensityMatrix: dimension exceeds the maximum");
  require_finite(mat_, "DensityMatrix");
  const double defect = hermiticity_defect(mat_);
  if (defect > tol_) {
    std::ostringstream msg;
    msg << "DensityMatrix: not Hermitian (defect " << defect << ")";
    throw ValidationError(msg.str());
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol_) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr.real() << " is not 1";
    throw ValidationError(msg.str());
  }
  const double lo = min_eigenvalue(mat_, std::max(tol_, 1e-12));
  if (lo < -tol_) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << lo;
    throw ValidationError(msg.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim <= 0) throw DimensionError("maximally_mixed: dimension must be positive");
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, double tol) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("pure: state vector must be nonzero and finite");
  return DensityMatrix(projector(psi), tol);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues(rho.matrix(), std::max(rho.tolerance(), 1e-12)));
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix projector(const ComplexVector& psi) {
  const ComplexVector v = psi / psi.norm();
  return v * v.adjoint();
}

}  // namespace qcap
