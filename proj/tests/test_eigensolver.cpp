#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ptspec/assembly.hpp"
#include "ptspec/eigensolver.hpp"

using namespace ptspec;

namespace {

std::vector<Complex> sorted_by_re_im(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

// Worst-case distance between two eigenvalue multisets of equal size.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  REQUIRE(a.size() == b.size());
  a = sorted_by_re_im(std::move(a));
  b = sorted_by_re_im(std::move(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

ComplexMatrix random_complex_symmetric(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Complex v(u(rng), u(rng));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

}  // namespace

TEST_CASE("diagonal matrices return their diagonal") {
  const ComplexMatrix m =
      ComplexMatrix::diagonal({Complex(1, 2), Complex(-3, 0), Complex(0, -5)});
  const auto eigs = eigenvalues(m);
  CHECK(multiset_distance(eigs, {Complex(1, 2), Complex(-3, 0), Complex(0, -5)}) <
        1e-14);
}

TEST_CASE("2x2 closed form") {
  ComplexMatrix m(2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 3.0;
  m(1, 1) = 4.0;
  const double root = std::sqrt(33.0);
  CHECK(multiset_distance(eigenvalues(m),
                          {Complex((5.0 - root) / 2.0, 0.0),
                           Complex((5.0 + root) / 2.0, 0.0)}) < 1e-13);
}

TEST_CASE("companion matrices of fixed polynomials") {
  // p(z) = (z-1)(z-2)(z-3)(z-4)(z-5)
  //      = z^5 - 15z^4 + 85z^3 - 225z^2 + 274z - 120.
  {
    const std::vector<Complex> coeff = {-120, 274, -225, 85, -15};  // a_0..a_4
    ComplexMatrix c(5);
    for (std::size_t i = 0; i + 1 < 5; ++i) c(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < 5; ++i) c(i, 4) = -coeff[i];
    CHECK(multiset_distance(eigenvalues(c), {Complex(1, 0), Complex(2, 0),
                                             Complex(3, 0), Complex(4, 0),
                                             Complex(5, 0)}) < 1e-9);
  }
  // p(z) = (z^2+1)(z - (2+3i)) = z^3 - (2+3i)z^2 + z - (2+3i).
  {
    const std::vector<Complex> coeff = {Complex(-2, -3), Complex(1, 0),
                                        Complex(-2, -3)};
    ComplexMatrix c(3);
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    for (std::size_t i = 0; i < 3; ++i) c(i, 2) = -coeff[i];
    CHECK(multiset_distance(eigenvalues(c),
                            {Complex(0, 1), Complex(0, -1), Complex(2, 3)}) <
          1e-10);
  }
}

TEST_CASE("eigenvalue sum reproduces the trace") {
  const ComplexMatrix m = random_complex_symmetric(40, 12345);
  Complex sum = 0.0;
  for (const Complex& e : eigenvalues(m)) sum += e;
  CHECK(std::abs(sum - m.trace()) <= 1e-9 * m.frobenius_norm());
}

TEST_CASE("unitary similarity leaves the spectrum unchanged") {
  const std::size_t n = 20;
  ComplexMatrix a = random_complex_symmetric(n, 777);
  const auto ref = eigenvalues(a);

  // Apply random complex Givens rotations G a G^H (c real, |c|^2+|s|^2=1).
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rot = 0; rot < 25; ++rot) {
    const std::size_t p = rng() % n;
    std::size_t q = rng() % n;
    if (p == q) q = (q + 1) % n;
    const double theta = u(rng);
    const double alpha = u(rng);
    const Complex phase(std::cos(alpha), std::sin(alpha));
    const double c = std::cos(theta);
    const Complex s = std::sin(theta) * phase;
    for (std::size_t j = 0; j < n; ++j) {  // rows
      const Complex ap = a(p, j), aq = a(q, j);
      a(p, j) = c * ap + s * aq;
      a(q, j) = -std::conj(s) * ap + c * aq;
    }
    for (std::size_t i = 0; i < n; ++i) {  // columns (right-multiply by G^H)
      const Complex ap = a(i, p), aq = a(i, q);
      a(i, p) = c * ap + std::conj(s) * aq;
      a(i, q) = -s * ap + c * aq;
    }
  }
  CHECK(multiset_distance(eigenvalues(a), ref) < 1e-8);
}

TEST_CASE("Hermitian input yields numerically real eigenvalues") {
  const std::size_t n = 30;
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Complex(u(rng), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v(u(rng), u(rng));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  const double bound = 1e-11 * m.frobenius_norm();
  for (const Complex& e : eigenvalues(m)) CHECK(std::fabs(e.imag()) <= bound);
}

TEST_CASE("eigenpairs satisfy the residual contract") {
  const BasisSpec basis(30);
  const ComplexMatrix m = assemble(PotentialSpec::shifted_ho(), basis,
                                   QuadratureSpec::standard(basis.x_support));
  const auto pairs = eigenpairs(m, 0.0, 20.0);
  REQUIRE(!pairs.empty());
  const double bound = 1e-8 * m.frobenius_norm();
  for (const auto& p : pairs) {
    CHECK(!p.defective);
    REQUIRE(p.vector.size() == m.dim());
    CHECK(residual(m, p) <= bound);
    CHECK(p.value.real() >= -1e-9);
    CHECK(p.value.real() <= 20.0 + 1e-9);
  }
  // Low shifted-oscillator levels: 2n + 5/4.
  REQUIRE(pairs.size() >= 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(std::abs(pairs[k].value - Complex(2.0 * k + 1.25, 0.0)) < 1e-8);
}

TEST_CASE("eigenpair extraction is deterministic") {
  const ComplexMatrix m = random_complex_symmetric(24, 2024);
  const auto a = eigenpairs(m, -2.0, 2.0);
  const auto b = eigenpairs(m, -2.0, 2.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].defective == b[i].defective);
    REQUIRE(a[i].vector.size() == b[i].vector.size());
    for (std::size_t j = 0; j < a[i].vector.size(); ++j)
      CHECK(a[i].vector[j] == b[i].vector[j]);
  }
}

TEST_CASE("a Jordan block is reported defective, not silently normalized") {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;  // [[0,1],[0,0]]: one eigenvector for a double eigenvalue
  const auto pairs = eigenpairs(m, -1.0, 1.0);
  REQUIRE(pairs.size() == 2);
  int defective = 0, healthy = 0;
  for (const auto& p : pairs) {
    CHECK(std::abs(p.value) < 1e-12);
    if (p.defective) {
      ++defective;
      CHECK(p.vector.empty());
    } else {
      ++healthy;
      CHECK(residual(m, p) <= 1e-8 * m.frobenius_norm());
    }
  }
  CHECK(defective >= 1);
  CHECK(healthy >= 1);
}
