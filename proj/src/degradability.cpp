#include "qcap/degradability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "qcap/errors.hpp"

namespace qcap {

KrausChannel rank2_qubit_channel(const Rank2QubitParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta)) throw ValidationError("rank2_qubit_channel: non-finite angle");
  ComplexMatrix plus = ComplexMatrix::Zero(2, 2);
  plus(0, 0) = std::cos(p.alpha);
  plus(1, 1) = std::cos(p.beta);
  ComplexMatrix minus = ComplexMatrix::Zero(2, 2);
  minus(0, 1) = std::sin(p.beta);
  minus(1, 0) = std::sin(p.alpha);
  return KrausChannel(2, 2, {plus, minus});
}

bool CandidateMap::is_completely_positive(double tol) const {
  return eigenvalues(eigenvalues.size() - 1) >= -tol;
}

namespace {

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, ComplexMatrix* kernel_projector) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  ComplexMatrix inv = ComplexMatrix::Zero(m.cols(), m.rows());
  ComplexMatrix range = ComplexMatrix::Zero(m.cols(), m.cols());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) <= kPseudoInverseCutoff) continue;
    const ComplexVector v = svd.matrixV().col(i);
    inv += v * svd.matrixU().col(i).adjoint() / s(i);
    range += v * v.adjoint();
  }
  *kernel_projector = identity(m.cols()) - range;
  return inv;
}

// Map with transfer matrix T_target pinv(T_source), followed by the output
// transpose. Source and target share the input of the original channel.
CandidateMap ratio_map(const KrausChannel& target, const KrausChannel& source) {
  const ComplexMatrix t_target = transfer_matrix(target);
  const ComplexMatrix t_source = transfer_matrix(source);
  ComplexMatrix kernel;
  const ComplexMatrix inv = pseudo_inverse(t_source, &kernel);
  const double leak = (t_target * kernel).norm();
  if (leak > 1e-8 * std::max(1.0, t_target.norm())) {
    std::ostringstream msg;
    msg << "candidate map: the source transfer matrix is singular on a direction the target does not annihilate"
        << " (leak " << leak << ")";
    throw SingularConstructionError(msg.str());
  }
  const ChoiMatrix plain = choi_from_transfer(t_target * inv, source.dout(), target.dout());
  ComplexMatrix r = partial_transpose(plain.matrix(), {static_cast<int>(target.dout()), static_cast<int>(source.dout())}, 0);
  r = 0.5 * (r + r.adjoint());
  ChoiMatrix choi(source.dout(), target.dout(), std::move(r));
  RealVector values = choi.eigenvalues();
  return CandidateMap{std::move(choi), std::move(values)};
}

std::optional<std::array<double, 4>> plus_minus_spectrum(double numerator, double denominator) {
  if (std::abs(denominator) < 1e-12) return std::nullopt;
  const double x = std::abs(numerator / denominator);
  std::array<double, 4> out{-x, x, 1.0, 1.0};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CandidateMap candidate_conjugate_antidegrading_map(const KrausChannel& ch) {
  return ratio_map(ch, complementary(ch));
}

CandidateMap candidate_conjugate_degrading_map(const KrausChannel& ch) {
  return ratio_map(complementary(ch), ch);
}

std::optional<std::array<double, 4>> conjugate_antidegrading_spectrum(const Rank2QubitParams& p) {
  const double sa = std::pow(std::sin(p.alpha), 2), sb = std::pow(std::sin(p.beta), 2);
  return plus_minus_spectrum(sb + sa - 1.0, sb - sa);
}

std::optional<std::array<double, 4>> conjugate_degrading_spectrum(const Rank2QubitParams& p) {
  const double sa = std::pow(std::sin(p.alpha), 2), sb = std::pow(std::sin(p.beta), 2);
  return plus_minus_spectrum(sb - sa, sb + sa - 1.0);
}

bool is_entanglement_breaking(const KrausChannel& ch, double tol) {
  const ChoiMatrix r = kraus_to_choi(ch);
  const ComplexMatrix pt = partial_transpose(r.matrix(), {static_cast<int>(ch.dout()), static_cast<int>(ch.din())}, 0);
  return min_eigenvalue(pt) >= -tol;
}

std::string to_string(DegradabilityMode mode) {
  switch (mode) {
    case DegradabilityMode::degradable:
      return "degradable";
    case DegradabilityMode::antidegradable:
      return "antidegradable";
    case DegradabilityMode::conjugate_degradable:
      return "conjugate_degradable";
    case DegradabilityMode::conjugate_antidegradable:
      return "conjugate_antidegradable";
  }
  return "unknown";
}

DegradabilityMode parse_mode(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  for (const DegradabilityMode mode : kAllModes) {
    if (to_string(mode) == key) return mode;
  }
  throw ValidationError("unknown degradability mode '" + std::string(name) + "'");
}

namespace {

using RealMatrix = Eigen::MatrixXd;

// Orthonormal real coordinates on n x n Hermitian matrices: diagonal entries,
// then sqrt(2) Re and -sqrt(2) Im of each strictly upper entry.
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(Index n) : n_(n) {}
  Index size() const { return n_ * n_; }

  RealVector to_vector(const ComplexMatrix& x) const {
    RealVector v(size());
    Index p = 0;
    for (Index i = 0; i < n_; ++i) v(p++) = x(i, i).real();
    for (Index i = 0; i < n_; ++i) {
      for (Index j = i + 1; j < n_; ++j) {
        const Complex z = 0.5 * (x(i, j) + std::conj(x(j, i)));
        v(p++) = std::sqrt(2.0) * z.real();
        v(p++) = -std::sqrt(2.0) * z.imag();
      }
    }
    return v;
  }

  ComplexMatrix to_matrix(const RealVector& v) const {
    ComplexMatrix x(n_, n_);
    Index p = 0;
    for (Index i = 0; i < n_; ++i) x(i, i) = v(p++);
    const double r = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < n_; ++i) {
      for (Index j = i + 1; j < n_; ++j) {
        const Complex z(v(p) * r, -v(p + 1) * r);
        p += 2;
        x(i, j) = z;
        x(j, i) = std::conj(z);
      }
    }
    return x;
  }

 private:
  Index n_;
};

struct Problem {
  Index src_dim;  // input of the unknown map
  Index tgt_dim;  // output of the unknown map
  Index din;      // input of the channel
  ComplexMatrix t_source;
  ComplexMatrix t_target;
};

Problem make_problem(const KrausChannel& ch, DegradabilityMode mode) {
  const KrausChannel env = complementary(ch);
  const bool from_output = mode == DegradabilityMode::degradable || mode == DegradabilityMode::conjugate_degradable;
  const bool conj = mode == DegradabilityMode::conjugate_degradable || mode == DegradabilityMode::conjugate_antidegradable;
  const KrausChannel& source = from_output ? ch : env;
  const KrausChannel& target = from_output ? env : ch;
  ComplexMatrix target_choi = kraus_to_choi(target).matrix();
  if (conj) {
    target_choi = partial_transpose(target_choi, {static_cast<int>(target.dout()), static_cast<int>(ch.din())}, 0);
  }
  Problem pr{source.dout(), target.dout(), ch.din(), transfer_matrix(source), ComplexMatrix()};
  pr.t_target = gamma_involution(ChoiMatrix(ch.din(), target.dout(), std::move(target_choi)));
  return pr;
}

// Stacks the real and imaginary parts of [Gamma(X) T_source ; Tr_out X].
class AffineConstraints {
 public:
  AffineConstraints(const Problem& pr, const HermitianCoordinates& coords) : pr_(pr) {
    const Index out_rows = pr.tgt_dim * pr.tgt_dim * pr.din * pr.din;
    const Index rows = 2 * (out_rows + pr.src_dim * pr.src_dim);
    a_.resize(rows, coords.size());
    RealVector e = RealVector::Zero(coords.size());
    for (Index k = 0; k < coords.size(); ++k) {
      e.setZero();
      e(k) = 1.0;
      a_.col(k) = evaluate(coords.to_matrix(e));
    }
    b_ = stack(pr.t_target, identity(pr.src_dim));
  }

  RealVector evaluate(const ComplexMatrix& x) const {
    const int t = static_cast<int>(pr_.tgt_dim), s = static_cast<int>(pr_.src_dim);
    const ComplexMatrix composed = gamma_reshuffle(x, {t, s}, {t, s}) * pr_.t_source;
    return stack(composed, partial_trace(x, {t, s}, {1}));
  }

  const RealMatrix& a() const { return a_; }
  const RealVector& b() const { return b_; }

 private:
  static RealVector stack(const ComplexMatrix& first, const ComplexMatrix& second) {
    const Index n1 = first.size(), n2 = second.size();
    RealVector out(2 * (n1 + n2));
    Index p = 0;
    for (Index i = 0; i < first.rows(); ++i) {
      for (Index j = 0; j < first.cols(); ++j) {
        out(p++) = first(i, j).real();
        out(p++) = first(i, j).imag();
      }
    }
    for (Index i = 0; i < second.rows(); ++i) {
      for (Index j = 0; j < second.cols(); ++j) {
        out(p++) = second(i, j).real();
        out(p++) = second(i, j).imag();
      }
    }
    return out;
  }

  const Problem& pr_;
  RealMatrix a_;
  RealVector b_;
};

ComplexMatrix psd_part(const ComplexMatrix& x) {
  const Eigensystem es = hermitian_eigensystem(x, std::numeric_limits<double>::infinity());
  const RealVector clipped = es.values.cwiseMax(0.0);
  return es.vectors * clipped.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

DegradabilityVerdict feasibility_search(const KrausChannel& ch, DegradabilityMode mode,
                                        const FeasibilityOptions& options) {
  if (options.max_iters < 0 || options.check_every < 1 || !(options.residual_tol > 0.0) || !(options.psd_tol >= 0.0)) {
    throw ValidationError("feasibility_search: invalid options");
  }
  const Problem pr = make_problem(ch, mode);
  const Index n = pr.tgt_dim * pr.src_dim;
  if (n > options.max_choi_dim) {
    std::ostringstream msg;
    msg << "feasibility_search: Choi dimension " << n << " exceeds the limit " << options.max_choi_dim;
    throw ResourceError(msg.str());
  }
  const HermitianCoordinates coords(n);
  const AffineConstraints cons(pr, coords);

  // Least-squares projection onto {x : A x = b} through a thin SVD of A.
  Eigen::JacobiSVD<RealMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(cons.a(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cutoff = kPseudoInverseCutoff * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  const RealMatrix v = svd.matrixV().leftCols(rank);
  const RealVector x_ls = v * (svd.matrixU().leftCols(rank).transpose() * cons.b()).cwiseQuotient(s.head(rank));
  auto affine = [&](const RealVector& x) -> RealVector { return x - v * (v.transpose() * x) + x_ls; };
  auto residual_of = [&](const RealVector& x) { return (cons.a() * x - cons.b()).norm(); };

  DegradabilityVerdict verdict{mode, false, std::nullopt, 0.0, 0.0, 0, true, false};
  const double ls_residual = residual_of(x_ls);
  if (ls_residual > options.residual_tol) {
    verdict.residual = ls_residual;
    verdict.min_eigenvalue = min_eigenvalue(coords.to_matrix(x_ls), std::numeric_limits<double>::infinity());
    verdict.inconsistent = true;
    return verdict;
  }

  auto psd = [&](const RealVector& x) { return coords.to_vector(psd_part(coords.to_matrix(x))); };

  RealVector x = x_ls;
  RealVector p = RealVector::Zero(x.size()), q = RealVector::Zero(x.size());
  double best_residual = std::numeric_limits<double>::infinity();
  double best_min_eig = -std::numeric_limits<double>::infinity();
  double window_start = std::numeric_limits<double>::infinity();
  int window_iter = 0;
  for (int it = 0;; ++it) {
    if (it % options.check_every == 0) {
      // x is the PSD iterate (x_ls at the start); y is its affine image.
      // Either one can serve as the witness.
      const double res = residual_of(x);
      const RealVector y = affine(x);
      const double res_y = residual_of(y);
      const ComplexMatrix cand_y = coords.to_matrix(y);
      const double me_y = min_eigenvalue(cand_y, std::numeric_limits<double>::infinity());
      const ComplexMatrix cand_x = coords.to_matrix(x);
      const double me_x = it == 0 ? me_y : min_eigenvalue(cand_x, std::numeric_limits<double>::infinity());
      const bool y_ok = res_y < options.residual_tol && me_y > -options.psd_tol;
      const bool x_ok = res < options.residual_tol && me_x > -options.psd_tol;
      if (y_ok || x_ok) {
        const ComplexMatrix& candidate = y_ok ? cand_y : cand_x;
        verdict.holds = true;
        verdict.witness = ChoiMatrix(pr.src_dim, pr.tgt_dim, 0.5 * (candidate + candidate.adjoint()));
        verdict.residual = y_ok ? res_y : res;
        verdict.min_eigenvalue = y_ok ? me_y : me_x;
        verdict.iterations = it;
        return verdict;
      }
      const double me = std::max(me_x, me_y);
      // The starting point solves the linear part exactly, so progress is
      // measured on the PSD iterates only.
      if (it > 0 && res < best_residual) {
        best_residual = res;
        best_min_eig = me;
      }
      if (it - window_iter >= options.stall_window) {
        if (best_residual > window_start * 0.999) {
          verdict.residual = best_residual;
          verdict.min_eigenvalue = best_min_eig;
          verdict.iterations = it;
          return verdict;
        }
        window_start = best_residual;
        window_iter = it;
      }
    }
    if (it >= options.max_iters) {
      verdict.residual = best_residual;
      verdict.min_eigenvalue = best_min_eig;
      verdict.iterations = it;
      verdict.converged = false;
      return verdict;
    }
    const RealVector y = affine(x + p);
    p = x + p - y;
    const RealVector z = psd(y + q);
    q = y + q - z;
    x = z;
  }
}

ClassificationReport classify(const KrausChannel& ch, const std::vector<DegradabilityMode>& modes,
                              const FeasibilityOptions& options) {
  ClassificationReport report{ch.din(), ch.dout(), ch.num_kraus(), choi_rank(ch), is_entanglement_breaking(ch), {}};
  for (const DegradabilityMode mode : modes) report.verdicts.push_back(feasibility_search(ch, mode, options));
  return report;
}

}  // namespace qcap
