#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcap/cloners.hpp"

using namespace qcap;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

cpp_int factorial(int n) {
  cpp_int out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

cpp_int choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// alpha_j = ((N+1)/(M+1)) (M-N)! (M-j)! / ((M-N-j)! M!)
cpp_rational alpha_oracle(int n, int m, int j) {
  return cpp_rational(n + 1, m + 1) * cpp_rational(factorial(m - n) * factorial(m - j), factorial(m - n - j) * factorial(m));
}

}  // namespace

TEST_CASE("alpha in exact arithmetic") {
  for (int n = 1; n <= 50; ++n) {
    for (int m = n; m <= 50; ++m) {
      const std::vector<cpp_rational> alpha = alpha_coefficients<cpp_rational>({n, m});
      cpp_rational sum = 0;
      for (int j = 0; j <= m - n; ++j) {
        CHECK(alpha[j] == alpha_oracle(n, m, j));
        sum += alpha[j];
      }
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("majorization and monotonicity, N <= M <= 50") {
  for (int n = 1; n <= 50; ++n) {
    for (int m = n; m <= 50; ++m) {
      const ClonerSpec spec{n, m};
      const std::vector<cpp_rational> alpha = alpha_coefficients<cpp_rational>(spec);
      const std::vector<cpp_rational> beta = beta_coefficients<cpp_rational>(spec);
      cpp_rational sum_b = 0;
      for (const auto& b : beta) sum_b += b;
      CHECK(sum_b == 1);
      for (std::size_t j = 1; j < alpha.size(); ++j) {
        CHECK(alpha[j] < alpha[j - 1]);
        CHECK(beta[j] < beta[j - 1]);
      }
      CHECK(majorizes<cpp_rational>(beta, alpha, cpp_rational(0)));
      CHECK(majorizes(beta_coefficients<double>(spec), alpha_coefficients<double>(spec)));

      // Prefix sums differ by alpha_{k+1}(k+1)/M: exact, and within 1e-12 in double.
      const std::vector<double> alpha_d = alpha_coefficients<double>(spec);
      const std::vector<double> beta_d = beta_coefficients<double>(spec);
      cpp_rational pa = 0, pb = 0;
      double pa_d = 0.0, pb_d = 0.0;
      for (int k = 0; k <= m - n; ++k) {
        pa += alpha[k];
        pb += beta[k];
        pa_d += alpha_d[k];
        pb_d += beta_d[k];
        const cpp_rational next = k + 1 <= m - n ? alpha[k + 1] : cpp_rational(0);
        const double next_d = k + 1 <= m - n ? alpha_d[k + 1] : 0.0;
        CHECK(pb - pa == next * (k + 1) / m);
        CHECK(std::abs((pb_d - pa_d) - next_d * (k + 1) / m) < 1e-12);
      }
    }
  }
}

TEST_CASE("1 -> M traced output has equal gaps, M <= 20") {
  for (int m = 2; m <= 20; ++m) {
    const cpp_rational tri(m * (m + 1), 2);
    const cpp_rational gap = cpp_rational(2 + m) / (m * tri);
    const std::vector<cpp_rational> eig = traced_b_eigenvalues<cpp_rational>(m);
    // For N = 1 the same diagonal is beta.
    const std::vector<cpp_rational> beta = beta_coefficients<cpp_rational>({1, m});
    REQUIRE(eig.size() == beta.size());
    cpp_rational sum = 0;
    for (std::size_t j = 0; j < eig.size(); ++j) {
      CHECK(eig[j] == beta[j]);
      sum += eig[j];
      if (j > 0) CHECK(eig[j - 1] - eig[j] == gap);
    }
    CHECK(sum == 1);
    const OneToMCoefficients c = one_to_m_degrading_coefficients(m);
    CHECK(c.b == doctest::Approx(static_cast<double>(gap)).epsilon(1e-15));
  }
}

TEST_CASE("combinatorial identity, N <= M <= 30") {
  for (int n = 1; n <= 30; ++n) {
    for (int m = n; m <= 30; ++m) {
      const cpp_int expected = choose(m + 1, n);
      for (int j = 0; j <= m - n; ++j) {
        cpp_int sum = 0;
        for (int k = 0; k <= n; ++k) sum += choose(k + j, k) * choose(m - k - j, n - k);
        CHECK(sum == expected);
        CHECK(cpp_int(css_binomial_sum(n, m, j)) == expected);
      }
    }
  }
}
