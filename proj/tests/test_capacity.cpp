#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcap/capacity.hpp"
#include "qcap/cloners.hpp"
#include "qcap/errors.hpp"
#include "qcap/random.hpp"
#include "qcap/unruh.hpp"
#include "test_util.hpp"

using namespace qcap;
using namespace qcap::test;

namespace {

// H(B) - H(E) computed from the Kraus form, without the Stinespring route.
double coherent_information_oracle(const KrausChannel& ch, const DensityMatrix& rho) {
  const ComplexMatrix b = apply_to_operator(ch, rho.matrix());
  const ComplexMatrix e = apply_to_operator(complementary(ch), rho.matrix());
  return entropy_of_spectrum(hermitian_eigenvalues(b)) - entropy_of_spectrum(hermitian_eigenvalues(e));
}

}  // namespace

TEST_CASE("coherent information examples") {
  CHECK(coherent_information(identity_channel(2), DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const KrausChannel cl = cloner_channel({1, 2});
  CHECK(coherent_information(cl, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-13));
  CHECK(std::abs(coherent_information(identity_channel(3), DensityMatrix::pure(ket(3, 1)))) < 1e-12);
  CHECK(std::abs(coherent_information(constant_channel(2, ket(2, 0)), DensityMatrix::pure(ket(2, 1)))) < 1e-12);
  CHECK_THROWS_AS(coherent_information(cl, DensityMatrix::maximally_mixed(3)), DimensionError);

  Rng rng(60);
  for (int t = 0; t < 20; ++t) {
    const KrausChannel ch = random_channel(3, 2, 3, rng);
    const DensityMatrix rho = random_density_matrix(3, rng);
    const double a = coherent_information(ch, rho);
    CHECK(std::abs(a - coherent_information(kraus_to_stinespring(ch), rho)) < 1e-12);
    CHECK(std::abs(a - coherent_information_oracle(ch, rho)) < 1e-10);
  }
}

TEST_CASE("covariance of cloner coherent information") {
  Rng rng(61);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const ClonerSpec spec : {ClonerSpec{1, 2}, ClonerSpec{2, 3}, ClonerSpec{2, 5}, ClonerSpec{3, 6}}) {
    const StinespringIsometry iso = build_cloner_isometry(spec);
    for (int t = 0; t < 5; ++t) {
      const DensityMatrix rho = random_density_matrix(spec.n_in + 1, rng);
      const std::array<double, 3> axis{normal(rng), normal(rng), normal(rng)};
      const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
      const ComplexMatrix u = su2_rotation(spec.n_in + 1, {axis[0] / norm, axis[1] / norm, axis[2] / norm}, normal(rng));
      const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
      CHECK(std::abs(coherent_information(iso, rho) - coherent_information(iso, rotated)) < 1e-9);
    }
  }
}

TEST_CASE("state parametrization") {
  CHECK(num_state_parameters(3) == 12);
  std::vector<double> theta(num_state_parameters(2), 0.0);
  theta[0] = 1.0;  // L = |0><0|
  CHECK(max_abs_diff(state_from_parameters(theta.data(), 2).matrix(), diag({1.0, 0.0})) < 1e-15);
  std::fill(theta.begin(), theta.end(), 0.0);
  CHECK(max_abs_diff(state_from_parameters(theta.data(), 2).matrix(), identity(2) / 2.0) < 1e-15);
  Rng rng(62);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> th(num_state_parameters(4));
    for (double& x : th) x = normal(rng);
    const DensityMatrix rho = state_from_parameters(th.data(), 4);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(min_eigenvalue(rho.matrix()) > -1e-14);
  }
}

TEST_CASE("maximization") {
  const StinespringIsometry iso12 = build_cloner_isometry({1, 2});
  SUBCASE("covariant shortcut") {
    MaximizeOptions o;
    o.covariant = true;
    const CoherentInfoResult r = maximize_coherent_information(iso12, o);
    CHECK(r.value == doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-13));
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK(max_abs_diff(r.argmax_state.matrix(), identity(2) / 2.0) == 0.0);
  }
  SUBCASE("optimizer finds the closed form") {
    const CoherentInfoResult r = maximize_coherent_information(iso12);
    CHECK(std::abs(r.value - (std::log2(3.0) - 1.0)) < 1e-6);
    CHECK(max_abs_diff(r.argmax_state.matrix(), identity(2) / 2.0) < 1e-3);
    CHECK(r.iterations > 1);

    const CoherentInfoResult r23 = maximize_coherent_information(build_cloner_isometry({2, 3}));
    CHECK(std::abs(r23.value - 1.0) < 1e-6);
  }
  SUBCASE("covariant channels never beat the maximally mixed input") {
    MaximizeOptions o;
    o.restarts = 50;
    for (const ClonerSpec spec : {ClonerSpec{1, 2}, ClonerSpec{1, 3}, ClonerSpec{2, 4}}) {
      const StinespringIsometry iso = build_cloner_isometry(spec);
      const double at_mixed = coherent_information(iso, DensityMatrix::maximally_mixed(spec.n_in + 1));
      const CoherentInfoResult r = maximize_coherent_information(iso, o);
      CHECK(r.value <= at_mixed + 1e-6);
      CHECK(r.value >= at_mixed - 1e-8);
    }
  }
  SUBCASE("deterministic under a fixed seed regardless of threads") {
    MaximizeOptions one, many;
    one.threads = 1;
    many.threads = 4;
    one.restarts = many.restarts = 6;
    const StinespringIsometry iso = build_cloner_isometry({1, 3});
    const CoherentInfoResult a = maximize_coherent_information(iso, one);
    const CoherentInfoResult b = maximize_coherent_information(iso, many);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
    CHECK(a.argmax_state.matrix() == b.argmax_state.matrix());
  }
  SUBCASE("evaluation cap marks non-convergence") {
    MaximizeOptions o;
    o.max_evals = 5;
    o.restarts = 2;
    const CoherentInfoResult r = maximize_coherent_information(iso12, o);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
  }
  SUBCASE("non-covariant channel") {
    // Amplitude damping at gamma = 0.2 has its maximum away from I/2.
    const double g = 0.2;
    ComplexMatrix k0 = diag({1.0, std::sqrt(1 - g)}), k1 = ComplexMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(g);
    const KrausChannel ad(2, 2, {k0, k1});
    const StinespringIsometry iso = kraus_to_stinespring(ad);
    const CoherentInfoResult r = maximize_coherent_information(iso);
    // One-parameter oracle: scan diagonal inputs p|0><0| + (1-p)|1><1|.
    double best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
      const double p = i / 20000.0;
      best = std::max(best, coherent_information(iso, DensityMatrix(diag({p, 1.0 - p}))));
    }
    CHECK(std::abs(r.value - best) < 1e-6);
    CHECK(r.value > coherent_information(iso, DensityMatrix::maximally_mixed(2)) + 1e-4);
  }
  SUBCASE("invalid options") {
    MaximizeOptions o;
    o.restarts = 0;
    CHECK_THROWS_AS(maximize_coherent_information(iso12, o), ValidationError);
  }
}

TEST_CASE("subadditivity") {
  const KrausChannel cl = cloner_channel({1, 2});
  Rng rng(63);
  SUBCASE("product inputs are additive") {
    for (int t = 0; t < 10; ++t) {
      const DensityMatrix a = random_density_matrix(2, rng), b = random_density_matrix(2, rng);
      const SubadditivityResult r = subadditivity_check(cl, DensityMatrix(tensor_product(a.matrix(), b.matrix())));
      CHECK(std::abs(r.two_copy - r.split) < 1e-10);
      CHECK(r.split == doctest::Approx(coherent_information(cl, a) + coherent_information(cl, b)).epsilon(1e-12));
    }
  }
  SUBCASE("maximally entangled input") {
    const ComplexVector phi = (ket(4, 0) + ket(4, 3)) / std::sqrt(2.0);
    const SubadditivityResult r = subadditivity_check(cl, DensityMatrix::pure(phi));
    CHECK(r.two_copy <= r.split + 1e-8);
  }
  SUBCASE("random two-copy inputs") {
    for (int t = 0; t < 200; ++t) {
      const SubadditivityResult r = subadditivity_check(cl, random_density_matrix(4, rng, 1 + t % 4));
      CHECK(r.two_copy <= r.split + 1e-8);
    }
  }
  CHECK_THROWS_AS(subadditivity_check(cl, DensityMatrix::maximally_mixed(3)), DimensionError);
}
