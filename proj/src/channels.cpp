#include "qcap/channels.hpp"

#include <cmath>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

void require_positive_dims(Index din, Index dout, const char* what) {
  if (din <= 0 || dout <= 0) throw DimensionError(std::string(what) + ": dimensions must be positive");
  if (din > kMaxDimension || dout > kMaxDimension || din * dout > kMaxDimension) {
    throw DimensionError(std::string(what) + ": dimensions exceed the maximum");
  }
}

DensityMatrix as_state(ComplexMatrix m, double tol) {
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(m), tol);
}

}  // namespace

KrausChannel::KrausChannel(Index din, Index dout, std::vector<ComplexMatrix> ops, double tol)
    : din_(din), dout_(dout), ops_(std::move(ops)) {
  require_positive_dims(din_, dout_, "KrausChannel");
  if (ops_.empty()) throw ValidationError("KrausChannel: at least one Kraus operator is required");
  for (const auto& e : ops_) {
    if (e.rows() != dout_ || e.cols() != din_) {
      std::ostringstream msg;
      msg << "KrausChannel: Kraus operator has shape " << e.rows() << "x" << e.cols() << ", expected "
          << dout_ << "x" << din_;
      throw DimensionError(msg.str());
    }
    require_finite(e, "KrausChannel");
  }
  const double defect = completeness_defect();
  if (defect > tol) {
    std::ostringstream msg;
    msg << "KrausChannel: not trace preserving (completeness defect " << defect << ")";
    throw ValidationError(msg.str());
  }
}

double KrausChannel::completeness_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(din_, din_);
  for (const auto& e : ops_) sum.noalias() += e.adjoint() * e;
  return (sum - identity(din_)).cwiseAbs().maxCoeff();
}

ChoiMatrix::ChoiMatrix(Index din, Index dout, ComplexMatrix mat) : din_(din), dout_(dout), mat_(std::move(mat)) {
  require_positive_dims(din_, dout_, "ChoiMatrix");
  if (mat_.rows() != din_ * dout_ || mat_.cols() != din_ * dout_) {
    throw DimensionError("ChoiMatrix: matrix size must be din*dout");
  }
  require_finite(mat_, "ChoiMatrix");
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  if (hermiticity_defect(mat_) > 1e-9 * scale) throw ValidationError("ChoiMatrix: matrix is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint());
}

RealVector ChoiMatrix::eigenvalues() const { return hermitian_eigenvalues(mat_); }

double ChoiMatrix::min_eigenvalue() const { return qcap::min_eigenvalue(mat_); }

double ChoiMatrix::trace_preservation_defect() const {
  const ComplexMatrix reduced =
      partial_trace(mat_, {static_cast<int>(dout_), static_cast<int>(din_)}, {1});
  return (reduced - identity(din_)).cwiseAbs().maxCoeff();
}

bool ChoiMatrix::is_completely_positive(double tol) const { return min_eigenvalue() >= -tol; }

StinespringIsometry::StinespringIsometry(Index din, Index dout, Index denv, ComplexMatrix u, double tol)
    : din_(din), dout_(dout), denv_(denv), u_(std::move(u)) {
  require_positive_dims(din_, dout_, "StinespringIsometry");
  if (denv_ <= 0 || dout_ * denv_ > kMaxDimension) {
    throw DimensionError("StinespringIsometry: environment dimension out of range");
  }
  if (u_.rows() != dout_ * denv_ || u_.cols() != din_) {
    throw DimensionError("StinespringIsometry: matrix must be (dout*denv) x din");
  }
  require_finite(u_, "StinespringIsometry");
  const double defect = (u_.adjoint() * u_ - identity(din_)).cwiseAbs().maxCoeff();
  if (defect > tol) {
    std::ostringstream msg;
    msg << "StinespringIsometry: U^dagger U != I (defect " << defect << ")";
    throw ValidationError(msg.str());
  }
}

KrausChannel identity_channel(Index dim) { return KrausChannel(dim, dim, {identity(dim)}); }

KrausChannel depolarizing_channel(Index dim, double p) {
  // Weyl twirl: (1/d^2) sum_W W rho W^dagger = Tr(rho) I/d, so the map is
  // (1 - p + p/d^2) Ad(I) + (p/d^2) sum_{W != I} Ad(W). CP iff p <= d^2/(d^2 - 1).
  const double d = static_cast<double>(dim);
  const double w_id = 1.0 - p + p / (d * d);
  if (!(p >= 0.0) || w_id < 0.0) throw ValidationError("depolarizing_channel: parameter out of the CPTP range");
  std::vector<ComplexMatrix> ops;
  if (w_id > 0.0) ops.push_back(std::sqrt(w_id) * identity(dim));
  if (p > 0.0) {
    const double amp = std::sqrt(p) / d;
    const double two_pi = 2.0 * std::acos(-1.0);
    for (Index x = 0; x < dim; ++x) {
      for (Index z = 0; z < dim; ++z) {
        if (x == 0 && z == 0) continue;
        ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
        for (Index i = 0; i < dim; ++i) {
          op((i + x) % dim, i) = std::polar(amp, two_pi * static_cast<double>(z * i) / d);
        }
        ops.push_back(std::move(op));
      }
    }
  }
  return KrausChannel(dim, dim, std::move(ops));
}

KrausChannel constant_channel(Index din, const ComplexVector& phi) {
  const ComplexVector v = phi / phi.norm();
  std::vector<ComplexMatrix> ops;
  for (Index a = 0; a < din; ++a) {
    ComplexMatrix op = ComplexMatrix::Zero(v.size(), din);
    op.col(a) = v;
    ops.push_back(std::move(op));
  }
  return KrausChannel(din, v.size(), std::move(ops));
}

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
  const Index n = ch.din() * ch.dout();
  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  for (const auto& e : ch.ops()) {
    ComplexVector v(n);
    for (Index b = 0; b < ch.dout(); ++b) {
      for (Index a = 0; a < ch.din(); ++a) v(b * ch.din() + a) = e(b, a);
    }
    r.noalias() += v * v.adjoint();
  }
  return ChoiMatrix(ch.din(), ch.dout(), std::move(r));
}

KrausChannel choi_to_kraus(const ChoiMatrix& c, double drop) {
  const Eigensystem es = hermitian_eigensystem(c.matrix());
  const Index n = es.values.size();
  if (es.values(n - 1) < -kNotCpThreshold) {
    std::ostringstream msg;
    msg << "choi_to_kraus: Choi matrix has negative eigenvalue " << es.values(n - 1);
    throw NotCompletelyPositiveError(msg.str());
  }
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < n; ++i) {
    const double lambda = es.values(i);
    if (lambda <= drop) continue;
    ComplexMatrix op(c.dout(), c.din());
    for (Index b = 0; b < c.dout(); ++b) {
      for (Index a = 0; a < c.din(); ++a) op(b, a) = std::sqrt(lambda) * es.vectors(b * c.din() + a, i);
    }
    ops.push_back(std::move(op));
  }
  if (ops.empty()) throw ValidationError("choi_to_kraus: Choi matrix is zero");
  return KrausChannel(c.din(), c.dout(), std::move(ops), 1e-9);
}

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch) {
  const Index denv = ch.num_kraus();
  ComplexMatrix u(ch.dout() * denv, ch.din());
  for (Index b = 0; b < ch.dout(); ++b) {
    for (Index k = 0; k < denv; ++k) u.row(b * denv + k) = ch.ops()[k].row(b);
  }
  return StinespringIsometry(ch.din(), ch.dout(), denv, std::move(u), 1e-9);
}

KrausChannel stinespring_to_kraus(const StinespringIsometry& iso) {
  std::vector<ComplexMatrix> ops(iso.denv(), ComplexMatrix::Zero(iso.dout(), iso.din()));
  for (Index b = 0; b < iso.dout(); ++b) {
    for (Index k = 0; k < iso.denv(); ++k) ops[k].row(b) = iso.matrix().row(b * iso.denv() + k);
  }
  return KrausChannel(iso.din(), iso.dout(), std::move(ops), 1e-9);
}

ComplexMatrix apply_to_operator(const KrausChannel& ch, const ComplexMatrix& x) {
  if (x.rows() != ch.din() || x.cols() != ch.din()) throw DimensionError("apply: input dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(ch.dout(), ch.dout());
  for (const auto& e : ch.ops()) out.noalias() += e * x * e.adjoint();
  return out;
}

ComplexMatrix apply_to_operator(const ChoiMatrix& c, const ComplexMatrix& x) {
  if (x.rows() != c.din() || x.cols() != c.din()) throw DimensionError("apply: input dimension mismatch");
  const Index din = c.din();
  ComplexMatrix out = ComplexMatrix::Zero(c.dout(), c.dout());
  for (Index b = 0; b < c.dout(); ++b) {
    for (Index bp = 0; bp < c.dout(); ++bp) {
      Complex acc{0.0, 0.0};
      for (Index a = 0; a < din; ++a) {
        for (Index ap = 0; ap < din; ++ap) acc += x(a, ap) * c.matrix()(b * din + a, bp * din + ap);
      }
      out(b, bp) = acc;
    }
  }
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  return as_state(apply_to_operator(ch, rho.matrix()), rho.tolerance());
}

DensityMatrix apply(const StinespringIsometry& iso, const DensityMatrix& rho) {
  const ComplexMatrix joint = joint_output(iso, rho.matrix());
  return as_state(partial_trace(joint, {static_cast<int>(iso.dout()), static_cast<int>(iso.denv())}, {0}),
                  rho.tolerance());
}

DensityMatrix apply(const ChoiMatrix& c, const DensityMatrix& rho) {
  return as_state(apply_to_operator(c, rho.matrix()), rho.tolerance());
}

ComplexMatrix joint_output(const StinespringIsometry& iso, const ComplexMatrix& rho) {
  if (rho.rows() != iso.din() || rho.cols() != iso.din()) throw DimensionError("apply: input dimension mismatch");
  return iso.matrix() * rho * iso.matrix().adjoint();
}

KrausChannel complementary(const StinespringIsometry& iso) {
  std::vector<ComplexMatrix> ops(iso.dout(), ComplexMatrix::Zero(iso.denv(), iso.din()));
  for (Index b = 0; b < iso.dout(); ++b) {
    for (Index k = 0; k < iso.denv(); ++k) ops[b].row(k) = iso.matrix().row(b * iso.denv() + k);
  }
  return KrausChannel(iso.din(), iso.denv(), std::move(ops), 1e-9);
}

KrausChannel complementary(const KrausChannel& ch) { return complementary(kraus_to_stinespring(ch)); }

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.dout() != second.din()) {
    std::ostringstream msg;
    msg << "compose: output dimension " << first.dout() << " does not match input dimension " << second.din();
    throw DimensionError(msg.str());
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(first.ops().size() * second.ops().size());
  for (const auto& s : second.ops()) {
    for (const auto& f : first.ops()) ops.push_back(s * f);
  }
  return KrausChannel(first.din(), second.dout(), std::move(ops), 1e-9);
}

KrausChannel tensor(const KrausChannel& first, const KrausChannel& second) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(first.ops().size() * second.ops().size());
  for (const auto& a : first.ops()) {
    for (const auto& b : second.ops()) ops.push_back(tensor_product(a, b));
  }
  return KrausChannel(first.din() * second.din(), first.dout() * second.dout(), std::move(ops), 1e-9);
}

KrausChannel convex_mixture(const KrausChannel& a, const KrausChannel& b, double p) {
  if (a.din() != b.din() || a.dout() != b.dout()) throw DimensionError("convex_mixture: channel shapes differ");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("convex_mixture: weight must lie in [0, 1]");
  std::vector<ComplexMatrix> ops;
  for (const auto& e : a.ops()) ops.push_back(std::sqrt(p) * e);
  for (const auto& e : b.ops()) ops.push_back(std::sqrt(1.0 - p) * e);
  return KrausChannel(a.din(), a.dout(), std::move(ops), 1e-9);
}

KrausChannel conjugate_by_unitaries(const KrausChannel& ch, const ComplexMatrix& input_unitary,
                                    const ComplexMatrix& output_unitary) {
  if (input_unitary.rows() != ch.din() || input_unitary.cols() != ch.din() ||
      output_unitary.rows() != ch.dout() || output_unitary.cols() != ch.dout()) {
    throw DimensionError("conjugate_by_unitaries: unitary dimensions do not match the channel");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& e : ch.ops()) ops.push_back(output_unitary * e * input_unitary);
  return KrausChannel(ch.din(), ch.dout(), std::move(ops), 1e-9);
}

ComplexMatrix gamma_reshuffle(const ComplexMatrix& m, const std::array<int, 2>& row_dims,
                              const std::array<int, 2>& col_dims) {
  const Index r1 = row_dims[0], r2 = row_dims[1], c1 = col_dims[0], c2 = col_dims[1];
  if (m.rows() != r1 * r2 || m.cols() != c1 * c2) throw DimensionError("gamma_reshuffle: dimension mismatch");
  ComplexMatrix out(r1 * c1, r2 * c2);
  for (Index i1 = 0; i1 < r1; ++i1) {
    for (Index i2 = 0; i2 < r2; ++i2) {
      for (Index j1 = 0; j1 < c1; ++j1) {
        for (Index j2 = 0; j2 < c2; ++j2) out(i1 * c1 + j1, i2 * c2 + j2) = m(i1 * r2 + i2, j1 * c2 + j2);
      }
    }
  }
  return out;
}

ComplexMatrix gamma_involution(const ChoiMatrix& r) {
  const int din = static_cast<int>(r.din()), dout = static_cast<int>(r.dout());
  return gamma_reshuffle(r.matrix(), {dout, din}, {dout, din});
}

ChoiMatrix choi_from_transfer(const ComplexMatrix& transfer, Index din, Index dout) {
  const int di = static_cast<int>(din), dO = static_cast<int>(dout);
  return ChoiMatrix(din, dout, gamma_reshuffle(transfer, {dO, dO}, {di, di}));
}

ComplexMatrix transfer_matrix(const KrausChannel& ch) { return gamma_involution(kraus_to_choi(ch)); }

Index choi_rank(const ChoiMatrix& c, double threshold) {
  const RealVector values = c.eigenvalues();
  Index rank = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > threshold) ++rank;
  }
  return rank;
}

Index choi_rank(const KrausChannel& ch, double threshold) { return choi_rank(kraus_to_choi(ch), threshold); }

}  // namespace qcap
