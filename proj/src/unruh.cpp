#include "qcap/unruh.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

void require_z(double z) {
  if (!(z > 0.0 && z < 1.0)) {
    std::ostringstream msg;
    msg << "Unruh parameter z must lie in (0, 1), got " << z;
    throw ValidationError(msg.str());
  }
}

void require_k(int k) {
  if (k < 0) throw ValidationError("Unruh block index must be nonnegative");
}

}  // namespace

Su2Generators su2_generators(Index dim) {
  if (dim < 2) throw ValidationError("su2_generators: dimension must be at least 2");
  const double j = (static_cast<double>(dim) - 1.0) / 2.0;
  ComplexMatrix raise = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix jz = ComplexMatrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const double m = j - static_cast<double>(i);
    jz(i, i) = m;
    if (i > 0) raise(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  return Su2Generators{0.5 * (raise + lower), Complex(0.0, -0.5) * (raise - lower), jz};
}

ComplexMatrix su2_rotation(Index dim, const std::array<double, 3>& axis, double theta) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(norm > 0.0)) throw ValidationError("su2_rotation: axis must be nonzero");
  const Su2Generators g = su2_generators(dim);
  const ComplexMatrix h = (axis[0] * g.jx + axis[1] * g.jy + axis[2] * g.jz) / norm;
  const Eigensystem es = hermitian_eigensystem(h);
  ComplexVector phases(es.values.size());
  for (Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0.0, -theta * es.values(i)));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

BlockWeights block_weights(double z, int k) {
  require_z(z);
  require_k(k);
  return BlockWeights{k, std::pow(1.0 - z, 3) * std::pow(z, k), (k + 1) / 2.0, (k + 2) / 2.0};
}

ComplexMatrix unruh_block(const std::array<double, 3>& n_hat, int k) {
  require_k(k);
  const double norm = std::sqrt(n_hat[0] * n_hat[0] + n_hat[1] * n_hat[1] + n_hat[2] * n_hat[2]);
  if (!(std::abs(norm - 1.0) <= 1e-10)) throw ValidationError("unruh_block: direction must be a unit vector");
  const Su2Generators g = su2_generators(k + 2);
  return (k + 1) / 2.0 * identity(k + 2) + n_hat[0] * g.jx + n_hat[1] * g.jy + n_hat[2] * g.jz;
}

double unruh_tail_bound(double z, int k_max) {
  require_z(z);
  require_k(k_max);
  const double m = k_max + 1.0;
  const double w = 1.0 - z;
  return std::pow(z, m) / (2.0 * std::log(2.0)) * (w * (m * w + z) + 2.0 * w * w);
}

int truncation_k(double z, double tail_tol) {
  require_z(z);
  if (!(tail_tol > 0.0)) throw ValidationError("truncation_k: tail tolerance must be positive");
  constexpr int kLimit = 1 << 30;
  // The bound decreases monotonically in K: bracket, then bisect.
  int hi = 1;
  while (unruh_tail_bound(z, hi) > tail_tol) {
    if (hi >= kLimit / 2) throw ResourceError("truncation_k: z too close to 1 for the requested tolerance");
    hi *= 2;
  }
  int lo = -1;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (mid >= 0 && unruh_tail_bound(z, mid) <= tail_tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double unruh_series(double z, int k_max) {
  require_z(z);
  require_k(k_max);
  double sum = 0.0;
  for (int k = k_max; k >= 0; --k) {
    sum += std::pow(z, k) * (k + 1.0) * (k + 2.0) * std::log1p(1.0 / (k + 1.0));
  }
  return std::pow(1.0 - z, 3) / (2.0 * std::log(2.0)) * sum;
}

UnruhCapacity unruh_capacity(double z, double tail_tol) {
  const int k = truncation_k(z, tail_tol);
  return UnruhCapacity{unruh_series(z, k), k, unruh_tail_bound(z, k)};
}

Index BlockDiagonal::dim() const {
  Index d = 0;
  for (const auto& b : blocks) d += b.rows();
  return d;
}

double BlockDiagonal::trace() const {
  double t = 0.0;
  for (const auto& b : blocks) t += b.trace().real();
  return t;
}

ComplexMatrix BlockDiagonal::dense() const {
  const Index d = dim();
  if (d > kMaxDimension) throw ResourceError("BlockDiagonal::dense: dimension exceeds the dense limit");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

RealVector BlockDiagonal::eigenvalues() const {
  RealVector out(dim());
  Index offset = 0;
  for (const auto& b : blocks) {
    const RealVector v = hermitian_eigenvalues(b);
    out.segment(offset, v.size()) = v;
    offset += v.size();
  }
  return out;
}

namespace {

// T_k times the average of unruh_block over the six axis directions, which
// equals the full Bloch-sphere average because the block is affine in n.
ComplexMatrix tau_b_block(double z, int k) {
  const BlockWeights w = block_weights(z, k);
  ComplexMatrix sum = ComplexMatrix::Zero(k + 2, k + 2);
  for (int axis = 0; axis < 3; ++axis) {
    for (const double sign : {1.0, -1.0}) {
      std::array<double, 3> n{0.0, 0.0, 0.0};
      n[axis] = sign;
      sum += unruh_block(n, k);
    }
  }
  return w.t_k / 6.0 * sum;
}

ComplexMatrix tau_e_block(double z, int k) {
  const BlockWeights w = block_weights(z, k);
  return w.t_k * w.s_tilde_k * identity(k + 1);
}

}  // namespace

UnruhOutputs unruh_outputs_maxmixed(double z, int k_max) {
  require_z(z);
  require_k(k_max);
  UnruhOutputs out;
  for (int k = 0; k <= k_max; ++k) {
    out.tau_b.blocks.push_back(tau_b_block(z, k));
    out.tau_e.blocks.push_back(tau_e_block(z, k));
  }
  return out;
}

double unruh_capacity_entropy_route(double z, int k_max) {
  require_z(z);
  require_k(k_max);
  // Blocks are generated one at a time; the full matrices grow like K^3.
  double hb = 0.0, he = 0.0;
  for (int k = k_max; k >= 0; --k) {
    hb += entropy_of_spectrum(hermitian_eigenvalues(tau_b_block(z, k)), 0.0);
    he += entropy_of_spectrum(hermitian_eigenvalues(tau_e_block(z, k)), 0.0);
  }
  return hb - he;
}

std::vector<UnruhSweepRow> unruh_sweep(double z_min, double z_max, int steps, double tail_tol) {
  if (!(z_min > 0.0 && z_min < z_max && z_max < 1.0)) {
    throw ValidationError("unruh_sweep: need 0 < z_min < z_max < 1");
  }
  if (steps < 2) throw ValidationError("unruh_sweep: need at least two steps");
  std::vector<UnruhSweepRow> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double z = (i == steps - 1) ? z_max : z_min + i * (z_max - z_min) / (steps - 1);
    rows.push_back(UnruhSweepRow{z, unruh_capacity(z, tail_tol).value});
  }
  return rows;
}

void write_unruh_csv(std::ostream& out, const std::vector<UnruhSweepRow>& rows) {
  out << "z,Q_bits\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", row.z, row.q_bits);
    out << buf;
  }
}

}  // namespace qcap
