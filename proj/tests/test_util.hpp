#pragma once

#include <array>
#include <cmath>

#include <doctest.h>

#include "qcap/channels.hpp"
#include "qcap/qmat.hpp"

namespace qcap::test {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

inline double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  return (kraus_to_choi(a).matrix() - kraus_to_choi(b).matrix()).norm();
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexVector ket(Index dim, Index i) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

// Bloch vector of a qubit operator: (Tr X sx, Tr X sy, Tr X sz).
inline std::array<double, 3> bloch(const ComplexMatrix& rho) {
  return {(rho * pauli_x()).trace().real(), (rho * pauli_y()).trace().real(), (rho * pauli_z()).trace().real()};
}

// Qubit state with Bloch angles (theta, phi).
inline ComplexVector qubit(double theta, double phi) {
  ComplexVector v(2);
  v << std::cos(theta / 2), std::exp(Complex(0, phi)) * std::sin(theta / 2);
  return v;
}

}  // namespace qcap::test
