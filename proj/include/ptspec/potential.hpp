#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ptspec/complex_matrix.hpp"

namespace ptspec {

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Decomposition V(x) = re_even(|x|) + i*sign(x)*im_odd(|x|), both parts
/// given on x >= 0. This is the form every PT-symmetric V(x) = conj(V(-x))
/// takes: even real part, odd imaginary part.
struct ParityParts {
  std::function<double(double)> re_even;
  std::function<double(double)> im_odd;
};

enum class PotentialKind { AhmedCubic, ExpPT, ShiftedHO, Harmonic, Custom };

/// A complex one-dimensional potential with PT structure metadata.
///
/// Built-in variants:
///   ahmed_cubic(g):  x^2/4 + i g x|x|
///   exp_pt():        x^2/4 + exp(-2i x|x|)
///   shifted_ho():    x^2  + i x
///   harmonic(k):     k x^2
/// custom_pt(name, re, im) evaluates re(x) + i*im(x) as given; the two
/// functions are *intended* to be even resp. odd, and pt_check verifies
/// that intent by sampling. Assembly trusts the declared parity (it only
/// ever evaluates on x > 0), so run pt_check on custom potentials first.
class PotentialSpec {
 public:
  static PotentialSpec ahmed_cubic(double g) {
    PotentialSpec p(PotentialKind::AhmedCubic, "ahmed_cubic");
    p.coupling_ = g;
    return p;
  }

  static PotentialSpec exp_pt() { return {PotentialKind::ExpPT, "exp_pt"}; }

  static PotentialSpec shifted_ho() {
    return {PotentialKind::ShiftedHO, "shifted_ho"};
  }

  static PotentialSpec harmonic(double k) {
    if (!(k > 0.0))
      throw std::invalid_argument("harmonic: spring constant must be positive");
    PotentialSpec p(PotentialKind::Harmonic, "harmonic");
    p.coupling_ = k;
    return p;
  }

  static PotentialSpec custom_pt(std::string name,
                                 std::function<double(double)> re_even,
                                 std::function<double(double)> im_odd) {
    PotentialSpec p(PotentialKind::Custom, std::move(name));
    p.custom_re_ = std::move(re_even);
    p.custom_im_ = std::move(im_odd);
    return p;
  }

  PotentialKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// g for ahmed_cubic, k for harmonic; unused otherwise.
  double coupling() const { return coupling_; }

  Complex evaluate(double x) const {
    switch (kind_) {
      case PotentialKind::AhmedCubic:
        return {0.25 * x * x, coupling_ * x * std::fabs(x)};
      case PotentialKind::ExpPT: {
        const double phase = 2.0 * x * std::fabs(x);
        return Complex(0.25 * x * x, 0.0) +
               Complex(std::cos(phase), -std::sin(phase));
      }
      case PotentialKind::ShiftedHO:
        return {x * x, x};
      case PotentialKind::Harmonic:
        return {coupling_ * x * x, 0.0};
      case PotentialKind::Custom:
        return {custom_re_(x), custom_im_(x)};
    }
    return {};  // unreachable
  }

  /// Coefficient c of the exact c*x^2 part of Re V. Assembly handles this
  /// part analytically; only re_even_residual goes through quadrature.
  double x2_coefficient() const {
    switch (kind_) {
      case PotentialKind::AhmedCubic:
      case PotentialKind::ExpPT:
        return 0.25;
      case PotentialKind::ShiftedHO:
        return 1.0;
      case PotentialKind::Harmonic:
        return coupling_;
      case PotentialKind::Custom:
        return 0.0;
    }
    return 0.0;
  }

  /// Re V(x) - x2_coefficient()*x^2 on x >= 0. Identically zero for every
  /// built-in except exp_pt (cos(2x^2)) and custom.
  double re_even_residual(double x) const {
    switch (kind_) {
      case PotentialKind::ExpPT:
        return std::cos(2.0 * x * x);
      case PotentialKind::Custom:
        return custom_re_(x);
      default:
        return 0.0;
    }
  }

  bool re_residual_is_zero() const {
    return kind_ == PotentialKind::AhmedCubic ||
           kind_ == PotentialKind::ShiftedHO ||
           kind_ == PotentialKind::Harmonic;
  }

  /// Im V(x) on x >= 0 (the odd part's positive branch).
  double im_odd(double x) const {
    switch (kind_) {
      case PotentialKind::AhmedCubic:
        return coupling_ * x * x;
      case PotentialKind::ExpPT:
        return -std::sin(2.0 * x * x);
      case PotentialKind::ShiftedHO:
        return x;
      case PotentialKind::Harmonic:
        return 0.0;
      case PotentialKind::Custom:
        return custom_im_(x);
    }
    return 0.0;
  }

  bool im_is_zero() const { return kind_ == PotentialKind::Harmonic; }

  ParityParts parity_parts() const {
    const double c = x2_coefficient();
    return {[p = *this, c](double x) {
              return c * x * x + p.re_even_residual(x);
            },
            [p = *this](double x) { return p.im_odd(x); }};
  }

  /// Samples |V(x) - conj(V(-x))| at quasi-random points (golden-ratio
  /// sequence) in [-half_width, half_width]; true iff all below 1e-12.
  bool pt_check(std::size_t samples, double half_width = 20.0) const {
    if (samples < 16)
      throw std::invalid_argument("pt_check: samples must be >= 16");
    const double inv_phi = 0.6180339887498949;
    double u = 0.5;
    for (std::size_t j = 0; j < samples; ++j) {
      u += inv_phi;
      u -= std::floor(u);
      const double x = (2.0 * u - 1.0) * half_width;
      if (std::abs(evaluate(x) - std::conj(evaluate(-x))) > 1e-12) return false;
    }
    return true;
  }

 private:
  PotentialSpec(PotentialKind kind, std::string name)
      : kind_(kind), name_(std::move(name)) {}

  PotentialKind kind_;
  std::string name_;
  double coupling_ = 0.0;
  std::function<double(double)> custom_re_;
  std::function<double(double)> custom_im_;
};

/// Resolves a built-in variant by its CLI name. `parameter` feeds the
/// coupling of ahmed_cubic / the spring constant of harmonic and is
/// ignored by the parameter-free variants.
inline PotentialSpec potential_from_name(const std::string& name,
                                         double parameter) {
  if (name == "ahmed_cubic") return PotentialSpec::ahmed_cubic(parameter);
  if (name == "exp_pt") return PotentialSpec::exp_pt();
  if (name == "shifted_ho") return PotentialSpec::shifted_ho();
  if (name == "harmonic") return PotentialSpec::harmonic(parameter);
  throw std::invalid_argument("unknown potential: " + name);
}

}  // namespace ptspec
