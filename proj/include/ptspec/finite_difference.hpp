#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ptspec/complex_matrix.hpp"
#include "ptspec/eigensolver.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/spectrum.hpp"

namespace ptspec {

/// Uniform grid on [-L, L] with Dirichlet walls at both ends. points counts
/// interior nodes; spacing h = 2L/(points+1). For a fair cross-check the
/// half-width should cover the classical turning points of every level
/// under comparison (the walls emulate bound-state decay, they must not
/// clip it).
struct GridSpec {
  double half_width;
  std::size_t points;

  GridSpec(double l, std::size_t n) : half_width(l), points(n) {
    if (!(l > 0.0))
      throw std::invalid_argument("GridSpec: half_width must be positive");
    if (n < 100) throw std::invalid_argument("GridSpec: points must be >= 100");
  }

  double spacing() const {
    return 2.0 * half_width / static_cast<double>(points + 1);
  }
};

/// Second-order finite-difference matrix of p^2 + V(x): 3-point stencil for
/// -d^2/dx^2 plus the potential on the diagonal. Complex symmetric
/// tridiagonal, returned dense for the shared eigensolver.
inline ComplexMatrix fd_matrix(const PotentialSpec& pot, const GridSpec& grid) {
  const std::size_t n = grid.points;
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  ComplexMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -grid.half_width + h * static_cast<double>(j + 1);
    m(j, j) = Complex(2.0 * inv_h2, 0.0) + pot.evaluate(x);
    if (j + 1 < n) {
      m(j, j + 1) = Complex(-inv_h2, 0.0);
      m(j + 1, j) = Complex(-inv_h2, 0.0);
    }
  }
  return m;
}

struct OracleRow {
  double energy_mdm;
  double energy_fd;  // NaN when no finite-difference partner exists at all
  double gap;
  bool flagged;  // no partner within 10x the report's convergence delta
};

namespace detail {

inline std::vector<double> fd_real_levels(const PotentialSpec& pot,
                                          const GridSpec& grid, double tol_abs,
                                          double tol_rel) {
  const ComplexMatrix m = fd_matrix(pot, grid);
  const std::vector<Complex> eigs = eigenvalues(m);
  return filter_real(eigs, tol_abs, tol_rel).real_levels;
}

inline double nearest(const std::vector<double>& sorted, double e) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), e);
  double best = std::numeric_limits<double>::infinity(), hit = sorted.front();
  if (it != sorted.end() && std::fabs(*it - e) < best) {
    best = std::fabs(*it - e);
    hit = *it;
  }
  if (it != sorted.begin() && std::fabs(*(it - 1) - e) < best) hit = *(it - 1);
  return hit;
}

}  // namespace detail

/// Matches every converged MDM real level of the report to the nearest
/// finite-difference real level on the given grid. Emits aligned gaps and
/// flags levels with no partner within 10x the convergence delta; applies
/// no tolerance judgment beyond the flag.
inline std::vector<OracleRow> oracle_compare(const PotentialSpec& pot,
                                             const SpectrumReport& report,
                                             const GridSpec& grid) {
  if (report.real_levels.empty())
    throw std::invalid_argument("oracle_compare: report has no converged levels");
  const std::vector<double> fd = detail::fd_real_levels(
      pot, grid, report.filter_abs, report.filter_rel);
  std::vector<OracleRow> rows;
  rows.reserve(report.real_levels.size());
  const double flag_width = 10.0 * report.convergence_delta;
  for (const RealLevel& lvl : report.real_levels) {
    const double partner = detail::nearest(fd, lvl.energy);
    const double gap = std::fabs(partner - lvl.energy);  // NaN propagates
    rows.push_back({lvl.energy, partner, gap,
                    !(gap <= flag_width)});
  }
  return rows;
}

/// Energy up to which the grid's own levels are trusted, by Richardson
/// estimation against the half-resolution grid: a level with
/// |E_fine - E_coarse|/3 <= err_budget has an O(h^2) error within budget.
/// Returns the energy of the first level exceeding the budget (so the
/// trusted region is strictly below), or +infinity if none does.
inline double fd_trusted_ceiling(const PotentialSpec& pot,
                                 const GridSpec& grid, double err_budget,
                                 double tol_abs = 1e-6,
                                 double tol_rel = 1e-8) {
  if (!(err_budget > 0.0))
    throw std::invalid_argument("fd_trusted_ceiling: err_budget must be > 0");
  const GridSpec coarse(grid.half_width,
                        std::max<std::size_t>(100, grid.points / 2));
  const std::vector<double> fine =
      detail::fd_real_levels(pot, grid, tol_abs, tol_rel);
  const std::vector<double> half =
      detail::fd_real_levels(pot, coarse, tol_abs, tol_rel);
  // Halving the point count doubles h, so the O(h^2) error quadruples and
  // |E_fine - E_half| / 3 estimates the fine-grid error. A fine level with
  // no coarse partner inside the match window has already outgrown the
  // region where the two grids agree, which caps trust just as surely as a
  // failed estimate, so the walk stops at whichever comes first.
  const auto matched = match_across_sizes(half, fine, 0.25);
  std::size_t j = 0;
  for (const double e : fine) {
    if (j >= matched.size() || matched[j].energy != e) return e;
    if (matched[j].cross_size_delta / 3.0 > err_budget) return e;
    ++j;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace ptspec
