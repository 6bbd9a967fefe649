#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptspec/complex_matrix.hpp"

namespace ptspec {

/// QR iteration failed to deflate an eigenvalue within the sweep budget.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::size_t index)
      : std::runtime_error(what), stuck_index(index) {}
  std::size_t stuck_index;
};

struct EigenPair {
  Complex value;
  std::vector<Complex> vector;  // unit 2-norm coefficient vector; empty if absent
  double residual = 0.0;        // ||M v - E v||_2 when vector present
  bool defective = false;       // inverse iteration could not produce a vector
};

namespace detail {

/// Diagonal similarity scaling (radix-2) equalizing row and column norms.
/// Writes the scale factors into d; a is modified in place.
inline void balance(ComplexMatrix& a, std::vector<double>& d) {
  const std::size_t n = a.dim();
  d.assign(n, 1.0);
  const double radix = 2.0, radix2 = 4.0;
  bool noconv = true;
  while (noconv) {
    noconv = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::fabs(a(j, i).real()) + std::fabs(a(j, i).imag());
        r += std::fabs(a(i, j).real()) + std::fabs(a(i, j).imag());
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        const double inv = 1.0 / f;
        d[i] *= f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
        noconv = true;
      }
    }
  }
}

/// One Householder reflector P = I - 2 u u^H, u supported on rows
/// [offset, n). Empty u means the column needed no elimination.
struct Reflector {
  std::size_t offset = 0;
  std::vector<Complex> u;
};

/// In-place reduction to upper Hessenberg form; returns the reflectors for
/// eigenvector back-transformation. Columns whose below-subdiagonal part is
/// already zero are skipped, so banded input costs only the scan.
inline std::vector<Reflector> hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Reflector> refl;
  if (n < 3) return refl;
  refl.reserve(n - 2);
  std::vector<Complex> u, tmp;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double below = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) below += std::norm(a(i, k));
    if (below == 0.0) {
      refl.push_back({});
      continue;
    }
    const std::size_t off = k + 1;
    const std::size_t len = n - off;
    u.assign(len, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < len; ++i) u[i] = a(off + i, k);
    const double sigma = std::sqrt(std::norm(u[0]) + below);
    const Complex phase =
        (u[0] == Complex(0.0, 0.0)) ? Complex(1.0, 0.0) : u[0] / std::abs(u[0]);
    u[0] += phase * sigma;
    double unorm = 0.0;
    for (const Complex& z : u) unorm += std::norm(z);
    unorm = std::sqrt(unorm);
    for (Complex& z : u) z /= unorm;

    // Left: rows off..n-1 over columns k..n-1.
    tmp.assign(n - k, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < len; ++i) {
      const Complex uc = std::conj(u[i]);
      for (std::size_t j = k; j < n; ++j) tmp[j - k] += uc * a(off + i, j);
    }
    for (std::size_t i = 0; i < len; ++i) {
      const Complex f = 2.0 * u[i];
      for (std::size_t j = k; j < n; ++j) a(off + i, j) -= f * tmp[j - k];
    }
    // Right: columns off..n-1 over all rows.
    tmp.assign(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc(0.0, 0.0);
      const Complex* row = a.row(i).data();
      for (std::size_t j = 0; j < len; ++j) acc += row[off + j] * u[j];
      tmp[i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Complex f = 2.0 * tmp[i];
      Complex* row = a.row(i).data();
      for (std::size_t j = 0; j < len; ++j) row[off + j] -= f * std::conj(u[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = Complex(0.0, 0.0);
    refl.push_back({off, u});
  }
  return refl;
}

/// Eigenvalues of [[a, b], [c, d]], larger-magnitude root first, using the
/// product form for the second root to dodge cancellation.
inline std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c,
                                          Complex d) {
  const Complex p = 0.5 * (a + d);
  Complex q = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  // Align q with p so p + q is the addition, not the cancellation.
  if (p.real() * q.real() + p.imag() * q.imag() < 0.0) q = -q;
  const Complex r1 = p + q;
  const Complex det = a * d - b * c;
  const Complex r2 = (r1 == Complex(0.0, 0.0)) ? p - q : det / r1;
  return {r1, r2};
}

/// Explicitly shifted QR iteration on an upper Hessenberg matrix (destroys
/// h). Wilkinson shift from the trailing 2x2 of the active block; real
/// exceptional shift at 10, 20, 30 stalled sweeps; deflation when a
/// subdiagonal is negligible against its diagonal neighbours. Unsorted.
inline std::vector<Complex> hessenberg_qr(ComplexMatrix& h) {
  const std::size_t n = h.dim();
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  if (n == 1) {
    eig[0] = h(0, 0);
    return eig;
  }
  const double eps = DBL_EPSILON;
  std::vector<double> rot_c(n);
  std::vector<Complex> rot_s(n);

  std::ptrdiff_t en = static_cast<std::ptrdiff_t>(n) - 1;
  int its = 0;
  while (en >= 0) {
    // Deflation point: smallest l with negligible subdiagonal above it.
    std::ptrdiff_t l = en;
    while (l > 0) {
      const double sub = std::abs(h(l, l - 1));
      const double tst = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (sub <= eps * tst) {
        h(l, l - 1) = Complex(0.0, 0.0);
        break;
      }
      --l;
    }
    if (l == en) {
      eig[en] = h(en, en);
      --en;
      its = 0;
      continue;
    }
    if (l == en - 1) {
      const auto [r1, r2] = eig2x2(h(l, l), h(l, en), h(en, l), h(en, en));
      eig[en] = r1;
      eig[en - 1] = r2;
      en -= 2;
      its = 0;
      continue;
    }
    if (its == 40)
      throw convergence_error(
          "eigenvalues: QR failed to deflate index " + std::to_string(en) +
              " within 40 sweeps",
          static_cast<std::size_t>(en));

    Complex shift;
    if (its == 10 || its == 20 || its == 30) {
      double x = std::abs(h(en, en - 1));
      if (en - 2 >= l) x += std::abs(h(en - 1, en - 2));
      shift = Complex(x, 0.0);
    } else {
      const auto [r1, r2] =
          eig2x2(h(en - 1, en - 1), h(en - 1, en), h(en, en - 1), h(en, en));
      shift = (std::abs(r1 - h(en, en)) < std::abs(r2 - h(en, en))) ? r1 : r2;
    }
    ++its;

    for (std::ptrdiff_t i = l; i <= en; ++i) h(i, i) -= shift;

    // Left pass: Givens rotations G_k zero the subdiagonal, acting on row
    // pairs (contiguous row segments).
    for (std::ptrdiff_t k = l; k < en; ++k) {
      const Complex aa = h(k, k), bb = h(k + 1, k);
      double c;
      Complex s;
      const double absa = std::abs(aa);
      if (absa == 0.0) {
        c = 0.0;
        s = Complex(1.0, 0.0);
      } else {
        const double r = std::sqrt(absa * absa + std::norm(bb));
        c = absa / r;
        s = (aa / absa) * std::conj(bb) / (r);
      }
      rot_c[k] = c;
      rot_s[k] = s;
      Complex* rk = h.row(k).data();
      Complex* rk1 = h.row(k + 1).data();
      for (std::ptrdiff_t j = k; j <= en; ++j) {
        const Complex x = rk[j], y = rk1[j];
        rk[j] = c * x + s * y;
        rk1[j] = -std::conj(s) * x + c * y;
      }
    }
    // Right pass: multiply by G_k^H on the right. Each row transforms
    // independently, so walk rows (contiguous) applying rotations in k order.
    for (std::ptrdiff_t i = l; i <= en; ++i) {
      Complex* ri = h.row(i).data();
      const std::ptrdiff_t k0 = std::max(l, i - 1);
      for (std::ptrdiff_t k = k0; k < en; ++k) {
        const Complex x = ri[k], y = ri[k + 1];
        ri[k] = rot_c[k] * x + std::conj(rot_s[k]) * y;
        ri[k + 1] = -rot_s[k] * x + rot_c[k] * y;
      }
    }
    for (std::ptrdiff_t i = l; i <= en; ++i) h(i, i) += shift;
  }
  return eig;
}

struct HessenbergData {
  ComplexMatrix h;
  std::vector<Reflector> reflectors;
  std::vector<double> scale;
};

inline HessenbergData reduce(const ComplexMatrix& m) {
  HessenbergData out{m, {}, {}};
  balance(out.h, out.scale);
  out.reflectors = hessenberg(out.h);
  return out;
}

/// LU of (H - lambda I) for upper Hessenberg H, partial pivoting between
/// adjacent rows; zero pivots replaced by eps*hnorm so inverse iteration
/// can proceed at exact eigenvalues.
struct HessenbergLU {
  ComplexMatrix u;            // upper triangular factor (row-major)
  std::vector<Complex> mult;  // multiplier per column
  std::vector<bool> swapped;

  HessenbergLU(const ComplexMatrix& h, Complex lambda, double tiny)
      : u(h), mult(h.dim(), Complex(0.0, 0.0)), swapped(h.dim(), false) {
    const std::size_t n = u.dim();
    for (std::size_t i = 0; i < n; ++i) u(i, i) -= lambda;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (std::abs(u(k + 1, k)) > std::abs(u(k, k))) {
        swapped[k] = true;
        Complex* a = u.row(k).data();
        Complex* b = u.row(k + 1).data();
        for (std::size_t j = k; j < n; ++j) std::swap(a[j], b[j]);
      }
      Complex piv = u(k, k);
      if (std::abs(piv) < tiny) {
        piv = Complex(tiny, 0.0);
        u(k, k) = piv;
      }
      const Complex f = u(k + 1, k) / piv;
      mult[k] = f;
      u(k + 1, k) = Complex(0.0, 0.0);
      Complex* a = u.row(k).data();
      Complex* b = u.row(k + 1).data();
      for (std::size_t j = k + 1; j < n; ++j) b[j] -= f * a[j];
    }
    if (std::abs(u(n - 1, n - 1)) < tiny) u(n - 1, n - 1) = Complex(tiny, 0.0);
  }

  void solve(std::vector<Complex>& b) const {
    const std::size_t n = u.dim();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (swapped[k]) std::swap(b[k], b[k + 1]);
      b[k + 1] -= mult[k] * b[k];
    }
    for (std::size_t i = n; i-- > 0;) {
      const Complex* row = u.row(i).data();
      Complex acc = b[i];
      for (std::size_t j = i + 1; j < n; ++j) acc -= row[j] * b[j];
      b[i] = acc / row[i];
    }
  }
};

inline void normalize2(std::vector<Complex>& v) {
  const double nv = norm2(v);
  if (nv > 0.0)
    for (Complex& z : v) z /= nv;
}

}  // namespace detail

/// All eigenvalues of a dense complex matrix, sorted by (Re, Im) ascending.
/// Pipeline: balancing, Householder Hessenberg reduction, explicitly
/// shifted complex QR.
inline std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  ComplexMatrix h = m;
  std::vector<double> d;
  detail::balance(h, d);
  detail::hessenberg(h);
  std::vector<Complex> eig = detail::hessenberg_qr(h);
  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return eig;
}

/// Recomputed residual ||M v - E v||_2; never trusts the stored value.
inline double residual(const ComplexMatrix& m, const EigenPair& pair) {
  if (pair.vector.size() != m.dim())
    throw std::invalid_argument("residual: vector absent or wrong dimension");
  std::vector<Complex> mv = multiply(m, pair.vector);
  for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= pair.value * pair.vector[i];
  return norm2(mv);
}

/// Eigenpairs for every eigenvalue with Re in [re_lo, re_hi] (inclusive).
/// Vectors come from two rounds of inverse iteration on the Hessenberg form
/// with the converged eigenvalue as shift, seeded deterministically, with
/// re-orthogonalization inside groups of coincident eigenvalues, then are
/// back-transformed through the reflectors and balancing. A pair whose
/// residual cannot be pushed below 1e-8*||M||_F is flagged defective and
/// carries no vector.
inline std::vector<EigenPair> eigenpairs(const ComplexMatrix& m, double re_lo,
                                         double re_hi) {
  const std::size_t n = m.dim();
  detail::HessenbergData hd = detail::reduce(m);
  ComplexMatrix qr_work = hd.h;
  std::vector<Complex> eig = detail::hessenberg_qr(qr_work);
  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  const double hnorm = hd.h.frobenius_norm();
  const double mnorm = m.frobenius_norm();
  const double tiny = DBL_EPSILON * std::max(hnorm, DBL_MIN);
  const double accept = 1e-8 * mnorm;

  std::vector<EigenPair> out;
  std::vector<std::pair<Complex, std::vector<Complex>>> found;  // Hessenberg-space
  for (std::size_t idx = 0; idx < eig.size(); ++idx) {
    const Complex lambda = eig[idx];
    if (lambda.real() < re_lo || lambda.real() > re_hi) continue;

    // Coincident-group handling: perturb repeated shifts apart and collect
    // the vectors already found at this eigenvalue for re-orthogonalization.
    std::vector<const std::vector<Complex>*> peers;
    for (const auto& [lam, vec] : found)
      if (std::abs(lam - lambda) <= tiny) peers.push_back(&vec);
    const Complex shift =
        lambda + Complex(static_cast<double>(peers.size()) * tiny, 0.0);

    detail::HessenbergLU lu(hd.h, shift, tiny);
    std::mt19937 rng(0x9e3779b9u + static_cast<unsigned>(idx));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    EigenPair pair;
    pair.value = lambda;
    bool ok = false;
    std::vector<Complex> y(n);
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
      for (Complex& z : y) z = Complex(uni(rng), uni(rng));
      detail::normalize2(y);
      const int iters = attempt == 0 ? 2 : 3;
      for (int it = 0; it < iters; ++it) {
        lu.solve(y);
        for (const auto* p : peers) {
          Complex proj(0.0, 0.0);
          for (std::size_t i = 0; i < n; ++i) proj += std::conj((*p)[i]) * y[i];
          for (std::size_t i = 0; i < n; ++i) y[i] -= proj * (*p)[i];
        }
        detail::normalize2(y);
      }
      // Back-transform: reflectors in reverse, then balancing scales.
      std::vector<Complex> v = y;
      for (std::size_t r = hd.reflectors.size(); r-- > 0;) {
        const auto& refl = hd.reflectors[r];
        if (refl.u.empty()) continue;
        Complex proj(0.0, 0.0);
        for (std::size_t i = 0; i < refl.u.size(); ++i)
          proj += std::conj(refl.u[i]) * v[refl.offset + i];
        proj *= 2.0;
        for (std::size_t i = 0; i < refl.u.size(); ++i)
          v[refl.offset + i] -= proj * refl.u[i];
      }
      for (std::size_t i = 0; i < n; ++i) v[i] *= hd.scale[i];
      detail::normalize2(v);
      pair.vector = std::move(v);
      pair.residual = residual(m, pair);
      ok = pair.residual <= accept;
    }
    if (ok) {
      found.emplace_back(lambda, y);
    } else {
      pair.vector.clear();
      pair.residual = 0.0;
      pair.defective = true;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace ptspec
