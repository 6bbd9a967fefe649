#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ptspec/hermite.hpp"
#include "ptspec/quadrature.hpp"

using namespace ptspec;

// Reference values computed with 40-digit arbitrary-precision arithmetic
// (mpmath) from the closed form phi_m = H_m(x) exp(-x^2/2) / sqrt(2^m m! sqrt(pi)).
constexpr double kPhi7At1p3 = 0.40609866425190537779;
constexpr double kPhi20At2 = 0.32332192770771026959;
constexpr double kInvRoot4Pi = 0.75112554446494248286;  // pi^(-1/4)

TEST_CASE("ground state matches the closed form") {
  CHECK(hermite_function(0, 0.0) == Catch::Approx(kInvRoot4Pi).epsilon(1e-15));
  for (const double x : {0.25, 1.0, 2.5, 5.0}) {
    CHECK(hermite_function(0, x) ==
          Catch::Approx(kInvRoot4Pi * std::exp(-0.5 * x * x)).epsilon(1e-14));
  }
}

TEST_CASE("higher states match high-precision references") {
  CHECK(hermite_function(7, 1.3) == Catch::Approx(kPhi7At1p3).epsilon(1e-13));
  CHECK(hermite_function(20, 2.0) == Catch::Approx(kPhi20At2).epsilon(1e-13));
}

TEST_CASE("parity: phi_m(-x) = (-1)^m phi_m(x)") {
  for (std::size_t m : {0u, 1u, 4u, 9u, 30u}) {
    for (const double x : {0.3, 1.7, 6.2}) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      CHECK(hermite_function(m, -x) ==
            Catch::Approx(sign * hermite_function(m, x)).margin(1e-300));
    }
  }
}

TEST_CASE("three-term recurrence holds relative to term scale") {
  // sqrt(2/(m+1)) x phi_m = phi_{m+1} + sqrt(m/(m+1)) phi_{m-1}
  std::vector<double> phi(80);
  for (const double x : {0.7, 3.1, 11.0}) {
    hermite_functions(phi.size(), x, phi.data());
    for (std::size_t m = 1; m + 1 < phi.size(); ++m) {
      const double dm = static_cast<double>(m);
      const double lhs = std::sqrt(2.0 / (dm + 1.0)) * x * phi[m];
      const double rhs = phi[m + 1] + std::sqrt(dm / (dm + 1.0)) * phi[m - 1];
      const double scale = std::fabs(lhs) + std::fabs(phi[m + 1]) +
                           std::fabs(phi[m - 1]) + 1e-300;
      CHECK(std::fabs(lhs - rhs) / scale < 1e-13);
    }
  }
}

TEST_CASE("far tail underflows cleanly instead of overflowing the recurrence") {
  // Naive H_m e^{-x^2/2} evaluation dies near |x| ~ 38; the scaled
  // recurrence must return finite (possibly flushed-to-zero) values.
  for (const double x : {38.0, 45.0, 60.0}) {
    std::vector<double> phi(600);
    hermite_functions(phi.size(), x, phi.data());
    for (const double v : phi) {
      CHECK(std::isfinite(v));
    }
    CHECK(std::fabs(phi[0]) < 1e-250);
  }
  CHECK(std::isfinite(hermite_function(999, 50.0)));
}

TEST_CASE("orthonormality under the half-line quadrature") {
  const std::size_t count = 51;
  const BasisSpec basis(count);
  const auto nodes = half_line_nodes(QuadratureSpec::standard(basis.x_support));
  std::vector<std::vector<double>> phi(nodes.size(), std::vector<double>(count));
  for (std::size_t k = 0; k < nodes.size(); ++k)
    hermite_functions(count, nodes[k].x, phi[k].data());
  for (std::size_t m = 0; m < count; m += 5) {
    for (std::size_t n = m; n < count; n += 5) {
      if ((m + n) % 2 != 0) continue;  // odd pairs vanish by parity
      double acc = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k)
        acc += 2.0 * nodes[k].w * phi[k][m] * phi[k][n];
      CHECK(std::fabs(acc - (m == n ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("position matrix elements") {
  CHECK(x_element(3, 4) == Catch::Approx(std::sqrt(2.0)));
  CHECK(x_element(4, 3) == Catch::Approx(std::sqrt(2.0)));
  CHECK(x_element(0, 1) == Catch::Approx(std::sqrt(0.5)));
  CHECK(x_element(2, 5) == 0.0);
  CHECK(x_element(2, 2) == 0.0);

  CHECK(x2_element(3, 3) == Catch::Approx(3.5));
  CHECK(x2_element(1, 3) == Catch::Approx(std::sqrt(6.0) / 2.0));
  CHECK(x2_element(3, 1) == Catch::Approx(std::sqrt(6.0) / 2.0));
  CHECK(x2_element(0, 4) == 0.0);
  CHECK(x2_element(0, 1) == 0.0);
}

TEST_CASE("quadrature cross-check of x matrix elements") {
  // <phi_m | x | phi_n> over the full line = 2 * half-line integral for odd
  // m+n; analytic values are sqrt((max(m,n))/2) on the first off-diagonal.
  const BasisSpec basis(12);
  const auto spec = QuadratureSpec::standard(basis.x_support);
  for (std::size_t m : {0u, 3u, 7u}) {
    const auto val = integrate_half(
        [&](double x) {
          return 2.0 * x * hermite_function(m, x) * hermite_function(m + 1, x);
        },
        spec);
    CHECK(val.real() == Catch::Approx(x_element(m, m + 1)).epsilon(1e-12));
  }
}

TEST_CASE("basis spec validation") {
  CHECK_THROWS_AS(BasisSpec(0), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec(10, 1.0), std::invalid_argument);  // support too small
  const BasisSpec b(10);
  CHECK(b.x_support == Catch::Approx(std::sqrt(21.0) + 6.0));
  CHECK_NOTHROW(BasisSpec(10, BasisSpec::min_support(10)));
}

TEST_CASE("basis functions have decayed at the support edge") {
  for (std::size_t n : {3u, 10u, 64u, 200u}) {
    const BasisSpec basis(n);
    CHECK(std::fabs(hermite_function(n - 1, basis.x_support)) < 1e-8);
  }
}

TEST_CASE("column evaluator agrees with the bulk routine") {
  const std::size_t count = 40;
  HermiteEvaluator eval(count);
  std::vector<double> a(count), b(count);
  for (const double x : {0.0, 0.9, 4.2, 15.0}) {
    eval.column(x, a.data());
    hermite_functions(count, x, b.data());
    for (std::size_t m = 0; m < count; ++m) CHECK(a[m] == b[m]);
  }
}

TEST_CASE("argument guards") {
  CHECK_THROWS_AS(hermite_function(10000, 1.0), std::invalid_argument);
}
