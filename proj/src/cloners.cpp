#include "qcap/cloners.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qcap {

void ClonerSpec::validate(int max_outputs) const {
  if (n_in < 1 || m_out < n_in) {
    std::ostringstream msg;
    msg << "cloner spec requires 1 <= N <= M (got N=" << n_in << ", M=" << m_out << ")";
    throw ValidationError(msg.str());
  }
  if (m_out > max_outputs) {
    std::ostringstream msg;
    msg << "cloner spec M=" << m_out << " exceeds the configured cap " << max_outputs;
    throw ResourceError(msg.str());
  }
}

double alpha_kj_factorial_form(const ClonerSpec& spec, int k, int j) {
  const int n = spec.n_in, m = spec.m_out;
  if (k < 0 || k > n || j < 0 || j > m - n) throw ValidationError("alpha_kj: index out of range");
  auto lf = [](int x) { return std::lgamma(static_cast<double>(x) + 1.0); };
  const double log_first = lf(m - n) + lf(n + 1) - lf(k) - lf(n - k) - lf(m + 1);
  const double log_second = lf(k + j) + lf(m - k - j) - lf(j) - lf(m - n - j);
  return std::exp(log_first + log_second);
}

bool majorizes(const std::vector<double>& beta, const std::vector<double>& alpha, double slack) {
  return majorizes<double>(beta, alpha, slack);
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) {
    // out = C(n-k+i-1, i-1), so the product is divisible by i.
    std::uint64_t product;
    if (__builtin_mul_overflow(out, static_cast<std::uint64_t>(n - k + i), &product)) {
      throw ResourceError("binomial_u64: overflow");
    }
    out = product / static_cast<std::uint64_t>(i);
  }
  return out;
}

std::uint64_t css_binomial_sum(int n, int m, int j) {
  if (n < 0 || m < n || j < 0 || j > m - n) throw ValidationError("css_binomial_sum: index out of range");
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k) {
    std::uint64_t term;
    if (__builtin_mul_overflow(binomial_u64(k + j, k), binomial_u64(m - k - j, n - k), &term) ||
        __builtin_add_overflow(total, term, &total)) {
      throw ResourceError("css_binomial_sum: overflow");
    }
  }
  return total;
}

StinespringIsometry build_cloner_isometry(const ClonerSpec& spec) {
  spec.validate();
  const int n = spec.n_in, m = spec.m_out, denv = spec.env_dim();
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Index>(m + 1) * denv, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j < denv; ++j) {
      const double weight = alpha_kj<double>(spec, k, j);
      const double check = alpha_kj_factorial_form(spec, k, j);
      if (std::abs(weight - check) > 1e-10 * weight) {
        std::ostringstream msg;
        msg << "cloner coefficient formulas disagree at k=" << k << ", j=" << j << ": " << weight << " vs " << check;
        throw ValidationError(msg.str());
      }
      u(static_cast<Index>(k + j) * denv + j, k) = std::sqrt(weight);
    }
  }
  return StinespringIsometry(n + 1, m + 1, denv, std::move(u));
}

KrausChannel cloner_channel(const ClonerSpec& spec) { return stinespring_to_kraus(build_cloner_isometry(spec)); }

ComplexMatrix css_split_isometry(int n) {
  if (n < 1) throw ValidationError("css_split_isometry: need at least one qubit");
  ComplexMatrix w = ComplexMatrix::Zero(2 * n, n + 1);
  const double dn = n;
  for (int j = 0; j <= n; ++j) {
    if (j <= n - 1) w(j, j) = std::sqrt((n - j) / dn);
    if (j >= 1) w(n + j - 1, j) = std::sqrt(j / dn);
  }
  return w;
}

ComplexMatrix css_embedding(int n) {
  if (n < 1 || n > 12) throw ResourceError("css_embedding: supported for 1 <= n <= 12");
  const Index dim = Index{1} << n;
  ComplexMatrix e = ComplexMatrix::Zero(dim, n + 1);
  for (Index bits = 0; bits < dim; ++bits) {
    const int ones = __builtin_popcountll(static_cast<unsigned long long>(bits));
    e(bits, ones) = 1.0 / std::sqrt(static_cast<double>(binomial_u64(n, ones)));
  }
  return e;
}

ComplexVector symmetric_product_state(int n, const ComplexVector& psi) {
  if (psi.size() != 2) throw DimensionError("symmetric_product_state: expects a qubit state");
  const ComplexVector v = psi / psi.norm();
  ComplexVector out(n + 1);
  for (int k = 0; k <= n; ++k) {
    out(k) = std::sqrt(binomial<double>(n, k)) * std::pow(v(0), n - k) * std::pow(v(1), k);
  }
  return out;
}

namespace {

int css_qubits(const ComplexMatrix& rho_css) {
  if (rho_css.rows() != rho_css.cols() || rho_css.rows() < 2) {
    throw DimensionError("CSS operator must be square with dimension >= 2");
  }
  return static_cast<int>(rho_css.rows()) - 1;
}

}  // namespace

ComplexMatrix trace_one_qubit(const ComplexMatrix& rho_css) {
  const int n = css_qubits(rho_css);
  const ComplexMatrix w = css_split_isometry(n);
  return partial_trace(w * rho_css * w.adjoint(), {2, n}, {1});
}

ComplexMatrix single_qubit_marginal(const ComplexMatrix& rho_css) {
  const int n = css_qubits(rho_css);
  const ComplexMatrix w = css_split_isometry(n);
  return partial_trace(w * rho_css * w.adjoint(), {2, n}, {0});
}

namespace {

ComplexMatrix cloner_joint_output(const ClonerSpec& spec, const ComplexVector& psi) {
  const StinespringIsometry iso = build_cloner_isometry(spec);
  const ComplexVector in = symmetric_product_state(spec.n_in, psi);
  return joint_output(iso, in * in.adjoint());
}

}  // namespace

DensityMatrix clone_marginal(const ClonerSpec& spec, const ComplexVector& psi) {
  const ComplexMatrix tau = cloner_joint_output(spec, psi);
  const ComplexMatrix rho_b = partial_trace(tau, {spec.m_out + 1, spec.env_dim()}, {0});
  ComplexMatrix marginal = single_qubit_marginal(rho_b);
  return DensityMatrix(0.5 * (marginal + marginal.adjoint()));
}

DensityMatrix cloner_environment(const ClonerSpec& spec, const ComplexVector& psi) {
  const ComplexMatrix tau = cloner_joint_output(spec, psi);
  ComplexMatrix rho_e = partial_trace(tau, {spec.m_out + 1, spec.env_dim()}, {1});
  return DensityMatrix(0.5 * (rho_e + rho_e.adjoint()));
}

ShrinkFactors environment_shrink_factors(const ClonerSpec& spec) {
  spec.validate();
  if (spec.m_out != spec.n_in + 1) throw ValidationError("environment_shrink_factors: requires M = N + 1");
  const double n = spec.n_in;
  return ShrinkFactors{n / (n + 1.0) * (n + 3.0) / (n + 2.0), n / (n + 2.0)};
}

OneToMCoefficients one_to_m_degrading_coefficients(int m) {
  if (m < 2) throw ValidationError("one_to_m_degrading_coefficients: M must be at least 2");
  const double dm = m;
  const double tri = dm * (dm + 1.0) / 2.0;
  return OneToMCoefficients{1.0 / tri, (dm + 2.0) / (dm * tri)};
}

double cloner_capacity_closed_form(const ClonerSpec& spec) {
  spec.validate(std::numeric_limits<int>::max());
  return std::log2(static_cast<double>(spec.m_out + 1) / static_cast<double>(spec.m_out - spec.n_in + 1));
}

DegradingMapSpectrum degrading_map_1to2(double shrink) {
  if (!(shrink > 0.0) || !std::isfinite(shrink)) throw ValidationError("degrading_map_1to2: shrink must be positive");

  // |Phi> on B1 B2 B1' B2' (all qubits, B1 most significant).
  ComplexVector phi = ComplexVector::Zero(16);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) phi(a * 8 + b * 4 + a * 2 + b) = 0.5;
  }
  ComplexMatrix sym = ComplexMatrix::Zero(4, 4);
  {
    ComplexVector s0 = ComplexVector::Zero(4), s1 = ComplexVector::Zero(4), s2 = ComplexVector::Zero(4);
    s0(0) = 1.0;
    s1(1) = s1(2) = 1.0 / std::sqrt(2.0);
    s2(3) = 1.0;
    sym = s0 * s0.adjoint() + s1 * s1.adjoint() + s2 * s2.adjoint();
  }
  const ComplexMatrix p = tensor_product(sym, identity(4));
  const ComplexMatrix rho = p * (phi * phi.adjoint()) * p.adjoint();

  // UNOT o S on B1: X -> ((1 + 1/s)/2) Tr(X) I - X/s.
  const double inv = 1.0 / shrink;
  auto qubit_map = [&](int a, int ap) {
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    out(a, ap) -= inv;
    if (a == ap) out += 0.5 * (1.0 + inv) * identity(2);
    return out;
  };
  ComplexMatrix mapped = ComplexMatrix::Zero(16, 16);
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) {
      const ComplexMatrix img = qubit_map(a, ap);
      const ComplexMatrix block = rho.block(a * 8, ap * 8, 8, 8);
      for (int b = 0; b < 2; ++b) {
        for (int bp = 0; bp < 2; ++bp) mapped.block(b * 8, bp * 8, 8, 8) += img(b, bp) * block;
      }
    }
  }
  DegradingMapSpectrum out;
  out.choi = partial_trace(mapped, {2, 2, 4}, {0, 2});
  out.eigenvalues = hermitian_eigenvalues(out.choi);
  out.min_eigenvalue = out.eigenvalues(out.eigenvalues.size() - 1);
  out.rank = (out.eigenvalues.array() > 1e-9).count();
  return out;
}

KrausChannel conjugate_degrading_map_1to2() {
  const ComplexMatrix w = css_split_isometry(2);
  std::vector<ComplexMatrix> ops;
  for (int rest = 0; rest < 2; ++rest) {
    ComplexMatrix op(2, 3);
    for (int q = 0; q < 2; ++q) op.row(q) = w.row(q * 2 + rest);
    ops.push_back(std::move(op));
  }
  const KrausChannel one_clone(3, 2, std::move(ops));
  return compose(depolarizing_channel(2, 0.5), one_clone);
}

}  // namespace qcap
