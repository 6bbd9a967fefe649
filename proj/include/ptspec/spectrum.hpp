#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptspec/assembly.hpp"
#include "ptspec/complex_matrix.hpp"
#include "ptspec/eigensolver.hpp"
#include "ptspec/hermite.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/quadrature.hpp"

namespace ptspec {

struct SpectrumTolerances {
  double filter_abs = 1e-6;       // |Im E| <= filter_abs + filter_rel*|Re E|
  double filter_rel = 1e-8;
  double convergence_delta = 5e-3;  // cross-size agreement for table work;
                                    // use 1e-6 for analytically solvable cases
};

struct FilterResult {
  std::vector<double> real_levels;   // ascending
  std::vector<Complex> complex_reps; // one per conjugate pair, Im > 0
};

/// Splits a spectrum into real levels and conjugate-pair representatives.
/// The reality test is |Im E| <= tol_abs + tol_rel*|Re E|, boundary
/// inclusive.
inline FilterResult filter_real(std::span<const Complex> eigs, double tol_abs,
                                double tol_rel) {
  if (tol_abs < 0.0 || tol_rel < 0.0)
    throw std::invalid_argument("filter_real: tolerances must be >= 0");
  FilterResult out;
  for (const Complex& e : eigs) {
    if (std::fabs(e.imag()) <= tol_abs + tol_rel * std::fabs(e.real()))
      out.real_levels.push_back(e.real());
    else if (e.imag() > 0.0)
      out.complex_reps.push_back(e);
  }
  std::sort(out.real_levels.begin(), out.real_levels.end());
  std::sort(out.complex_reps.begin(), out.complex_reps.end(),
            [](Complex a, Complex b) {
              return a.real() != b.real() ? a.real() < b.real()
                                          : a.imag() < b.imag();
            });
  return out;
}

struct MatchedLevel {
  double energy;            // value from the larger basis
  double cross_size_delta;  // |E(n1) - E(n2)|
};

/// Greedy nearest-neighbor matching of two ascending level lists. A level
/// of the first list is converged iff its nearest unused partner in the
/// second differs by at most delta; unmatched levels are dropped as
/// truncation artifacts.
inline std::vector<MatchedLevel> match_across_sizes(
    std::span<const double> levels_n1, std::span<const double> levels_n2,
    double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("match_across_sizes: delta must be > 0");
  std::vector<MatchedLevel> out;
  std::size_t j = 0;
  for (const double e : levels_n1) {
    while (j + 1 < levels_n2.size() &&
           std::fabs(levels_n2[j + 1] - e) <= std::fabs(levels_n2[j] - e))
      ++j;
    if (j < levels_n2.size() && std::fabs(levels_n2[j] - e) <= delta) {
      out.push_back({levels_n2[j], std::fabs(levels_n2[j] - e)});
      ++j;
    }
  }
  return out;
}

struct RealLevel {
  std::size_t quantum_number;  // rank among converged real levels, 0-based
  double energy;
  double cross_size_delta;
};

struct SpectrumReport {
  PotentialSpec potential;
  std::size_t n1 = 0, n2 = 0;
  std::vector<RealLevel> real_levels;
  std::vector<Complex> complex_levels;  // representatives from the n2 run
  double filter_abs = 0.0, filter_rel = 0.0;
  double convergence_delta = 0.0;
  double converged_cutoff = 0.0;  // energies above this are untrusted
};

namespace detail {

inline std::vector<Complex> solve_spectrum(const PotentialSpec& pot,
                                           std::size_t n) {
  const BasisSpec basis(n);
  const QuadratureSpec quad = QuadratureSpec::standard(basis.x_support);
  ComplexMatrix m = assemble(pot, basis, quad);
  return eigenvalues(m);
}

template <typename F>
auto with_context(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const tolerance_error& e) {
    throw tolerance_error(ctx + ": " + e.what(), e.best, e.achieved);
  } catch (const convergence_error& e) {
    throw convergence_error(ctx + ": " + e.what(), e.stuck_index);
  }
}

}  // namespace detail

/// Full MDM pipeline at two basis sizes: assemble and diagonalize at n1 and
/// n2, filter real levels at each, keep the ones that agree across sizes,
/// and label them by ascending rank. converged_cutoff is the highest
/// converged energy plus one level gap.
inline SpectrumReport spectrum_report(const PotentialSpec& pot, std::size_t n1,
                                      std::size_t n2,
                                      const SpectrumTolerances& tol = {}) {
  if (!(n1 < n2))
    throw std::invalid_argument("spectrum_report: need n1 < n2");
  const std::string ctx =
      "spectrum_report(" + pot.name() + ", " + std::to_string(n1) + ", " +
      std::to_string(n2) + ")";
  SpectrumReport rep{pot, n1, n2, {}, {}, tol.filter_abs, tol.filter_rel,
                     tol.convergence_delta, 0.0};
  const std::vector<Complex> e1 = detail::with_context(
      ctx, [&] { return detail::solve_spectrum(pot, n1); });
  const std::vector<Complex> e2 = detail::with_context(
      ctx, [&] { return detail::solve_spectrum(pot, n2); });
  const FilterResult f1 = filter_real(e1, tol.filter_abs, tol.filter_rel);
  const FilterResult f2 = filter_real(e2, tol.filter_abs, tol.filter_rel);
  const auto matched = match_across_sizes(f1.real_levels, f2.real_levels,
                                          tol.convergence_delta);
  rep.real_levels.reserve(matched.size());
  for (std::size_t i = 0; i < matched.size(); ++i)
    rep.real_levels.push_back({i, matched[i].energy,
                               matched[i].cross_size_delta});
  rep.complex_levels = f2.complex_reps;
  const std::size_t k = rep.real_levels.size();
  if (k >= 2)
    rep.converged_cutoff = rep.real_levels[k - 1].energy +
                           (rep.real_levels[k - 1].energy -
                            rep.real_levels[k - 2].energy);
  else if (k == 1)
    rep.converged_cutoff = rep.real_levels[0].energy + 1.0;
  return rep;
}

struct GScanResult {
  std::vector<double> g_values;
  std::vector<int> real_counts;        // -1 marks a failed point
  std::vector<std::string> errors;     // aligned with g_values; empty = ok
  std::vector<std::pair<double, double>> merge_brackets;
};

/// Converged-real-level count of ahmed_cubic(g) over a g grid. A bracket is
/// recorded wherever the count drops by at least 2 between adjacent healthy
/// points (a conjugate pair leaving the real axis). Per-point failures are
/// recorded and the scan continues.
inline GScanResult scan_g(std::span<const double> g_grid, std::size_t n1,
                          std::size_t n2, const SpectrumTolerances& tol = {}) {
  for (std::size_t i = 0; i < g_grid.size(); ++i) {
    if (g_grid[i] < 0.0)
      throw std::invalid_argument("scan_g: couplings must be >= 0");
    if (i > 0 && !(g_grid[i] > g_grid[i - 1]))
      throw std::invalid_argument("scan_g: grid must be strictly increasing");
  }
  GScanResult out;
  for (const double g : g_grid) {
    out.g_values.push_back(g);
    try {
      const SpectrumReport rep =
          spectrum_report(PotentialSpec::ahmed_cubic(g), n1, n2, tol);
      out.real_counts.push_back(static_cast<int>(rep.real_levels.size()));
      out.errors.emplace_back();
    } catch (const std::exception& e) {
      out.real_counts.push_back(-1);
      out.errors.emplace_back(e.what());
    }
  }
  for (std::size_t i = 0; i + 1 < out.g_values.size(); ++i)
    if (out.real_counts[i] >= 0 && out.real_counts[i + 1] >= 0 &&
        out.real_counts[i] - out.real_counts[i + 1] >= 2)
      out.merge_brackets.emplace_back(out.g_values[i], out.g_values[i + 1]);
  return out;
}

/// Bisects on g until the interval where the converged real count drops by
/// 2 is narrower than tol_g. Counts are taken from spectrum_report of
/// ahmed_cubic at sizes (max(2, 4n/5), n).
inline std::pair<double, double> bracket_exceptional_point(
    double g_low, double g_high, std::size_t n, double tol_g,
    const SpectrumTolerances& tol = {}) {
  if (!(tol_g > 0.0))
    throw std::invalid_argument("bracket_exceptional_point: tol_g must be > 0");
  if (!(g_low < g_high))
    throw std::invalid_argument("bracket_exceptional_point: need g_low < g_high");
  const std::size_t n1 = std::max<std::size_t>(2, (4 * n) / 5);
  const auto count = [&](double g) {
    return static_cast<int>(
        spectrum_report(PotentialSpec::ahmed_cubic(g), n1, n, tol)
            .real_levels.size());
  };
  const int c_low = count(g_low);
  const int c_high = count(g_high);
  if (c_low - c_high != 2)
    throw std::invalid_argument(
        "bracket_exceptional_point: endpoint counts " + std::to_string(c_low) +
        " and " + std::to_string(c_high) + " do not differ by 2");
  while (g_high - g_low > tol_g) {
    const double mid = 0.5 * (g_low + g_high);
    const int c_mid = count(mid);
    if (c_mid == c_low)
      g_low = mid;
    else if (c_mid == c_high)
      g_high = mid;
    else
      throw std::runtime_error(
          "bracket_exceptional_point: anomalous real count " +
          std::to_string(c_mid) + " at g = " + std::to_string(mid));
  }
  return {g_low, g_high};
}

/// Share of an eigenvector's squared norm carried by even basis indices.
inline double parity_weight(std::span<const Complex> coeffs) {
  double even = 0.0, total = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const double w = std::norm(coeffs[m]);
    total += w;
    if (m % 2 == 0) even += w;
  }
  return total > 0.0 ? even / total : 0.0;
}

struct LabeledLevel {
  std::size_t quantum_number;
  double energy;
  double cross_size_delta;
  double even_weight;  // NaN if no eigenvector was obtainable
};

/// Attaches dominant-parity information to a report's converged real
/// levels by recomputing eigenvectors at the larger basis size. Potentials
/// here mix parity, so "even" can only mean even_weight > 1/2.
inline std::vector<LabeledLevel> parity_labeled_levels(
    const SpectrumReport& rep) {
  std::vector<LabeledLevel> out;
  if (rep.real_levels.empty()) return out;
  const BasisSpec basis(rep.n2);
  const QuadratureSpec quad = QuadratureSpec::standard(basis.x_support);
  const ComplexMatrix m = assemble(rep.potential, basis, quad);
  const double margin = 10.0 * (rep.filter_abs + 1e-12);
  const double lo = rep.real_levels.front().energy - margin;
  const double hi = rep.real_levels.back().energy + margin;
  const std::vector<EigenPair> pairs = eigenpairs(m, lo, hi);
  for (const RealLevel& lvl : rep.real_levels) {
    double weight = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    const EigenPair* hit = nullptr;
    for (const EigenPair& p : pairs) {
      const double d = std::abs(p.value - Complex(lvl.energy, 0.0));
      if (d < best) {
        best = d;
        hit = &p;
      }
    }
    if (hit && !hit->defective &&
        best <= rep.filter_abs + rep.filter_rel * std::fabs(lvl.energy) + 1e-9)
      weight = parity_weight(hit->vector);
    out.push_back({lvl.quantum_number, lvl.energy, lvl.cross_size_delta,
                   weight});
  }
  return out;
}

/// Largest distance from any eigenvalue to the conjugate of its nearest
/// partner; zero for a perfectly conjugation-closed spectrum.
inline double conjugation_defect(std::span<const Complex> eigs) {
  double worst = 0.0;
  for (const Complex& e : eigs) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& f : eigs) best = std::min(best, std::abs(std::conj(f) - e));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace ptspec
