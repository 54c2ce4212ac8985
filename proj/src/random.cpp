#include "qcap/random.hpp"

#include <cmath>

#include "qcap/errors.hpp"

namespace qcap {

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

ComplexMatrix random_isometry(Index rows, Index cols, Rng& rng) {
  if (rows < cols) throw DimensionError("random_isometry: rows must be >= cols");
  const ComplexMatrix g = random_ginibre(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

ComplexMatrix random_unitary(Index dim, Rng& rng) { return random_isometry(dim, dim, rng); }

ComplexVector random_pure_state(Index dim, Rng& rng) {
  ComplexVector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density_matrix(Index dim, Rng& rng, Index rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  const ComplexMatrix g = random_ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

KrausChannel random_channel(Index din, Index dout, Index num_kraus, Rng& rng) {
  const ComplexMatrix u = random_isometry(dout * num_kraus, din, rng);
  std::vector<ComplexMatrix> ops(num_kraus, ComplexMatrix::Zero(dout, din));
  for (Index b = 0; b < dout; ++b) {
    for (Index k = 0; k < num_kraus; ++k) ops[k].row(b) = u.row(b * num_kraus + k);
  }
  return KrausChannel(din, dout, std::move(ops));
}

}  // namespace qcap
