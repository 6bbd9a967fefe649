#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptspec {

/// Composite Gauss-Legendre rule over [0, x_max]: panel_count uniform
/// panels, nodes_per_panel points each. The partition always starts at 0,
/// so integrands with a kink there never see it inside a panel.
struct QuadratureSpec {
  std::size_t panel_count;
  std::size_t nodes_per_panel;
  double x_max;

  QuadratureSpec(std::size_t panels, std::size_t nodes, double xmax)
      : panel_count(panels), nodes_per_panel(nodes), x_max(xmax) {
    if (panels < 4)
      throw std::invalid_argument("QuadratureSpec: panel_count must be >= 4");
    if (nodes < 8)
      throw std::invalid_argument(
          "QuadratureSpec: nodes_per_panel must be >= 8");
    if (!(xmax > 0.0))
      throw std::invalid_argument("QuadratureSpec: x_max must be positive");
  }

  /// Default density: 32-point panels, about two panels per unit length,
  /// enough to resolve both the basis oscillation and the exp(2ix^2)
  /// potential tails before any refinement.
  static QuadratureSpec standard(double x_max) {
    const auto panels =
        std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2.0 * x_max)));
    return {panels, 32, x_max};
  }

  QuadratureSpec doubled() const {
    return {2 * panel_count, nodes_per_panel, x_max};
  }
};

struct QuadratureNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on (-1, 1), ascending by node. Roots of
/// the Legendre polynomial found by Newton iteration from Chebyshev initial
/// guesses; weights are positive, symmetric, and sum to 2.
inline std::vector<QuadratureNode> legendre_rule(std::size_t order) {
  if (order < 1 || order > 512)
    throw std::invalid_argument("legendre_rule: order must be in [1, 512]");
  std::vector<QuadratureNode> rule(order);
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // i-th root from the top, counting x > 0.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      // P_order(x) and its derivative by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) <= 1e-15 * (1.0 + std::fabs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("legendre_rule: Newton iteration failed at root " +
                               std::to_string(i));
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[order - 1 - i] = {x, w};
    rule[i] = {-x, w};
  }
  if (order % 2 == 1) {
    // Middle node is exactly 0 by symmetry; Newton lands there from the
    // cos guess but pin it to avoid a -0.0 artifact.
    rule[order / 2].x = 0.0;
  }
  return rule;
}

/// All nodes of the composite rule, mapped onto [0, x_max], ascending.
inline std::vector<QuadratureNode> half_line_nodes(const QuadratureSpec& spec) {
  const auto base = legendre_rule(spec.nodes_per_panel);
  std::vector<QuadratureNode> nodes;
  nodes.reserve(spec.panel_count * spec.nodes_per_panel);
  const double width = spec.x_max / static_cast<double>(spec.panel_count);
  for (std::size_t p = 0; p < spec.panel_count; ++p) {
    const double a = width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    for (const auto& [t, w] : base)
      nodes.push_back({mid + 0.5 * width * t, 0.5 * width * w});
  }
  return nodes;
}

/// Composite Gauss-Legendre approximation of the half-line integral
/// of f over [0, x_max]. Deterministic for a fixed spec; accuracy is the
/// caller's responsibility (see refine_until).
template <typename F>
std::complex<double> integrate_half(F&& f, const QuadratureSpec& spec) {
  std::complex<double> sum = 0.0;
  for (const auto& [x, w] : half_line_nodes(spec)) sum += w * f(x);
  return sum;
}

struct RefineResult {
  std::complex<double> value;
  double achieved;  // |last - previous| between the final two levels
};

/// Tolerance was not reached within the doubling budget; carries the best
/// value and the difference actually achieved.
class tolerance_error : public std::runtime_error {
 public:
  tolerance_error(const std::string& what, std::complex<double> best_value,
                  double achieved_diff)
      : std::runtime_error(what), best(best_value), achieved(achieved_diff) {}

  std::complex<double> best;
  double achieved;
};

/// Doubles panel_count until two successive approximations differ by less
/// than tol in absolute value (at most 8 doublings).
template <typename F>
RefineResult refine_until(F&& f, QuadratureSpec spec, double tol) {
  if (!(tol >= 1e-14))
    throw std::invalid_argument("refine_until: tol must be >= 1e-14");
  std::complex<double> prev = integrate_half(f, spec);
  double diff = 0.0;
  for (int d = 0; d < 8; ++d) {
    spec = spec.doubled();
    const std::complex<double> next = integrate_half(f, spec);
    diff = std::abs(next - prev);
    prev = next;
    if (diff < tol) return {next, diff};
  }
  throw tolerance_error("refine_until: tolerance not reached after 8 doublings",
                        prev, diff);
}

}  // namespace ptspec
