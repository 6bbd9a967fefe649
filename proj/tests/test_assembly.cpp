#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ptspec/assembly.hpp"
#include "ptspec/matrix_io.hpp"

using namespace ptspec;

// <phi_0 | 2 x|x| | phi_1> = 2 sqrt(2/pi), 40-digit arbitrary-precision value.
constexpr double kAhmed2M01 = 1.5957691216057307118;
// int_0^12 cos(2x^2) e^{-x^2} dx, same provenance as in test_quadrature.
constexpr double kCosGauss = 0.50414302000103402284;

namespace {
ComplexMatrix build(const PotentialSpec& pot, std::size_t n) {
  const BasisSpec basis(n);
  return assemble(pot, basis, QuadratureSpec::standard(basis.x_support));
}
}  // namespace

TEST_CASE("harmonic(1) assembles to the exact diagonal") {
  const ComplexMatrix m = build(PotentialSpec::harmonic(1.0), 12);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (i == j)
        CHECK(m(i, j) == Complex(2.0 * i + 1.0, 0.0));
      else
        CHECK(m(i, j) == Complex(0.0, 0.0));
    }
}

TEST_CASE("harmonic(4) assembles analytically") {
  // M = (2m+1) delta + 3 <m|x^2|n>: diag 5m + 2.5, second diagonal
  // 3 sqrt((m+1)(m+2))/2, nothing else.
  const ComplexMatrix m = build(PotentialSpec::harmonic(4.0), 12);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    CHECK(m(i, i).real() == Catch::Approx(5.0 * i + 2.5).epsilon(1e-15));
    CHECK(m(i, i).imag() == 0.0);
    if (i + 2 < m.dim()) {
      const double want = 1.5 * std::sqrt((i + 1.0) * (i + 2.0));
      CHECK(m(i, i + 2).real() == Catch::Approx(want).epsilon(1e-15));
      CHECK(m(i, i + 2) == m(i + 2, i));
    }
    if (i + 1 < m.dim()) CHECK(m(i, i + 1) == Complex(0.0, 0.0));
    if (i + 3 < m.dim()) CHECK(m(i, i + 3) == Complex(0.0, 0.0));
  }
}

TEST_CASE("ahmed_cubic(2) entries: analytic x^2 part and one reference integral") {
  const ComplexMatrix m = build(PotentialSpec::ahmed_cubic(2.0), 8);
  // Diagonal: 2m+1 + (1/4 - 1)(m + 1/2).
  CHECK(m(0, 0).real() == Catch::Approx(0.625).epsilon(1e-13));
  CHECK(m(0, 0).imag() == 0.0);
  CHECK(m(3, 3).real() == Catch::Approx(7.0 - 0.75 * 3.5).epsilon(1e-13));
  // x^2 second diagonal: (1/4 - 1) sqrt((m+1)(m+2))/2.
  CHECK(m(0, 2).real() ==
        Catch::Approx(-0.75 * std::sqrt(2.0) / 2.0).epsilon(1e-13));
  CHECK(m(0, 2).imag() == 0.0);
  // Imaginary odd-pair entry against the arbitrary-precision reference.
  CHECK(m(0, 1).real() == 0.0);
  CHECK(m(0, 1).imag() == Catch::Approx(kAhmed2M01).epsilon(1e-12));
  CHECK(m(1, 0) == m(0, 1));
}

TEST_CASE("exp_pt ground diagonal matches the reference integral") {
  const ComplexMatrix m = build(PotentialSpec::exp_pt(), 8);
  // 1 + (1/4 - 1)/2 + 2 <0|cos(2x^2)|0> with phi_0^2 = e^{-x^2}/sqrt(pi).
  const double want =
      0.625 + 2.0 * kCosGauss / std::sqrt(std::numbers::pi);
  CHECK(m(0, 0).real() == Catch::Approx(want).epsilon(1e-11));
  CHECK(m(0, 0).imag() == 0.0);
}

TEST_CASE("structure report passes for every built-in") {
  const PotentialSpec pots[] = {
      PotentialSpec::ahmed_cubic(2.0), PotentialSpec::exp_pt(),
      PotentialSpec::shifted_ho(), PotentialSpec::harmonic(1.0)};
  for (const auto& pot : pots) {
    const StructureReport rep = structure_report(build(pot, 40));
    CHECK(rep.is_symmetric);
    CHECK(rep.max_asym <= 1e-13);
    CHECK(rep.parity_phase_ok);
    CHECK(rep.max_phase_violation <= 1e-12);
  }
}

TEST_CASE("structure report catches a perturbed matrix") {
  ComplexMatrix m = build(PotentialSpec::ahmed_cubic(2.0), 12);
  m(0, 1) += Complex(1e-6, 0.0);  // breaks symmetry and the phase pattern
  const StructureReport rep = structure_report(m);
  CHECK(!rep.is_symmetric);
  CHECK(rep.max_asym >= 1e-7);
  CHECK(!rep.parity_phase_ok);
  CHECK(rep.max_phase_violation >= 1e-7);
}

TEST_CASE("unreachable element tolerance raises tolerance_error") {
  const BasisSpec basis(6);
  CHECK_THROWS_AS(assemble(PotentialSpec::exp_pt(), basis,
                           QuadratureSpec::standard(basis.x_support), 0.0),
                  tolerance_error);
}

TEST_CASE("assembly needs at least two basis functions") {
  CHECK_THROWS_AS(assemble(PotentialSpec::exp_pt(), BasisSpec(1),
                           QuadratureSpec::standard(BasisSpec(1).x_support)),
                  std::invalid_argument);
}

TEST_CASE("matrix dump round trip preserves every bit") {
  const ComplexMatrix m = build(PotentialSpec::ahmed_cubic(2.0), 6);
  std::stringstream ss;
  save_matrix(ss, m, "ahmed_cubic", 2.0);
  const MatrixDump dump = load_matrix(ss);
  CHECK(dump.potential == "ahmed_cubic");
  CHECK(dump.coupling == 2.0);
  REQUIRE(dump.matrix.dim() == m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      CHECK(dump.matrix(i, j) == m(i, j));
}

TEST_CASE("matrix loader rejects foreign headers") {
  std::stringstream ss("not-a-matrix 1\n");
  CHECK_THROWS_AS(load_matrix(ss), std::runtime_error);
}
