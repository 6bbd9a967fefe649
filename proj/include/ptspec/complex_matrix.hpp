#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ptspec {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return a_[i * dim_ + j];
  }

  std::span<Complex> row(std::size_t i) {
    return {a_.data() + i * dim_, dim_};
  }
  std::span<const Complex> row(std::size_t i) const {
    return {a_.data() + i * dim_, dim_};
  }

  Complex* data() { return a_.data(); }
  const Complex* data() const { return a_.data(); }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  static ComplexMatrix diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> a_;
};

/// y = M x.
inline std::vector<Complex> multiply(const ComplexMatrix& m,
                                     std::span<const Complex> x) {
  if (x.size() != m.dim())
    throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<Complex> y(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Complex s = 0.0;
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.dim(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace ptspec
