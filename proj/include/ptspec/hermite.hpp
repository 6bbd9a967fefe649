#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ptspec {

/// Truncated oscillator basis: the orthonormal eigenfunctions phi_m of
/// p^2 + x^2 with eigenvalues 2m+1, m = 0..size_n-1. x_support is the
/// half-width beyond which every retained function is numerically
/// negligible (classical turning point of the highest state plus an
/// evanescent margin).
struct BasisSpec {
  std::size_t size_n;
  double x_support;

  explicit BasisSpec(std::size_t n) : BasisSpec(n, default_support(n)) {}

  BasisSpec(std::size_t n, double support) : size_n(n), x_support(support) {
    if (n < 1) throw std::invalid_argument("BasisSpec: size_n must be >= 1");
    if (!(support >= min_support(n)))
      throw std::invalid_argument(
          "BasisSpec: x_support must be >= sqrt(2n+1) + 4");
  }

  static double min_support(std::size_t n) {
    return std::sqrt(2.0 * static_cast<double>(n) + 1.0) + 4.0;
  }
  static double default_support(std::size_t n) {
    return std::sqrt(2.0 * static_cast<double>(n) + 1.0) + 6.0;
  }
};

namespace detail {
constexpr double kInvRoot4Pi = 0.75112554446494248;  // pi^(-1/4)
constexpr double kLn2 = 0.69314718055994531;
}  // namespace detail

/// Evaluates phi_0(x) .. phi_{count-1}(x) into out by the three-term
/// recurrence on the normalized functions,
///   phi_m = x sqrt(2/m) phi_{m-1} - sqrt((m-1)/m) phi_{m-2}.
/// The Gaussian seed is carried as mantissa * 2^e so that no intermediate
/// underflows to zero before the recurrence climbs back into range; the
/// stored values themselves underflow gracefully where the functions are
/// genuinely below the double range.
inline void hermite_functions(std::size_t count, double x, double* out) {
  if (count == 0) return;
  const double t = -0.5 * x * x;
  int e = 0;
  double arg = t;
  if (t < -0.5) {
    e = static_cast<int>(std::ceil(t / detail::kLn2));  // e <= 0
    arg = t - e * detail::kLn2;                         // in (-ln 2, 0]
  }
  double prev = 0.0;
  double cur = detail::kInvRoot4Pi * std::exp(arg);  // phi_0 * 2^(-e)
  out[0] = std::ldexp(cur, e);
  for (std::size_t m = 1; m < count; ++m) {
    const double dm = static_cast<double>(m);
    const double next =
        x * std::sqrt(2.0 / dm) * cur - std::sqrt((dm - 1.0) / dm) * prev;
    prev = cur;
    cur = next;
    if (e < 0 && std::fabs(cur) > 0x1p512) {
      prev = std::ldexp(prev, -512);
      cur = std::ldexp(cur, -512);
      e += 512;
    }
    out[m] = std::ldexp(cur, e);
  }
}

/// phi_m(x), the m-th normalized Hermite function. Total on m < 1e4 and
/// finite x; no intermediate overflow for any such m.
inline double hermite_function(std::size_t m, double x) {
  if (m >= 10000) throw std::invalid_argument("hermite_function: m too large");
  std::vector<double> buf(m + 1);
  hermite_functions(m + 1, x, buf.data());
  return buf[m];
}

/// <phi_m | x | phi_n> = sqrt(max(m,n)/2) when |m-n| = 1, else 0.
inline double x_element(std::size_t m, std::size_t n) {
  const auto [lo, hi] = std::minmax(m, n);
  if (hi - lo != 1) return 0.0;
  return std::sqrt(0.5 * static_cast<double>(hi));
}

/// <phi_m | x^2 | phi_n>: m + 1/2 on the diagonal, sqrt((k+1)(k+2))/2 with
/// k = min(m,n) when |m-n| = 2, else 0.
inline double x2_element(std::size_t m, std::size_t n) {
  if (m == n) return static_cast<double>(m) + 0.5;
  const auto [lo, hi] = std::minmax(m, n);
  if (hi - lo != 2) return 0.0;
  const double k = static_cast<double>(lo);
  return 0.5 * std::sqrt((k + 1.0) * (k + 2.0));
}

/// Column evaluator with precomputed recurrence coefficients, for filling
/// large (basis x nodes) tables.
class HermiteEvaluator {
 public:
  explicit HermiteEvaluator(std::size_t count) : count_(count) {
    a_.resize(count);
    b_.resize(count);
    for (std::size_t m = 1; m < count; ++m) {
      const double dm = static_cast<double>(m);
      a_[m] = std::sqrt(2.0 / dm);
      b_[m] = std::sqrt((dm - 1.0) / dm);
    }
  }

  std::size_t count() const { return count_; }

  /// out[m] = phi_m(x) for m = 0..count-1.
  void column(double x, double* out) const {
    if (count_ == 0) return;
    const double t = -0.5 * x * x;
    int e = 0;
    double arg = t;
    if (t < -0.5) {
      e = static_cast<int>(std::ceil(t / detail::kLn2));
      arg = t - e * detail::kLn2;
    }
    double prev = 0.0;
    double cur = detail::kInvRoot4Pi * std::exp(arg);
    out[0] = std::ldexp(cur, e);
    for (std::size_t m = 1; m < count_; ++m) {
      const double next = x * a_[m] * cur - b_[m] * prev;
      prev = cur;
      cur = next;
      if (e < 0 && std::fabs(cur) > 0x1p512) {
        prev = std::ldexp(prev, -512);
        cur = std::ldexp(cur, -512);
        e += 512;
      }
      out[m] = std::ldexp(cur, e);
    }
  }

 private:
  std::size_t count_;
  std::vector<double> a_, b_;
};

}  // namespace ptspec
