#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "hoeffding/distribution.hpp"

namespace hoeffding {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule. Thread-safe.
const GaussRule& gauss_legendre(int n);

/// Panel layout and truncation policy for one-dimensional integrals.
struct QuadratureScheme {
  int panels = 32;
  int points = 64;
  double tail_eps = kTailEpsilon;
  /// Forced panel boundaries (atoms, indicator endpoints, derivative supports).
  std::vector<double> knots;
  /// Geometric refinement toward an endpoint where the density is unbounded.
  int grading_levels = 18;
  double grading_ratio = 0.2;
  int graded_points = 16;
  /// Above this many knots, panels follow the knots only with `sparse_points` nodes each.
  int sparse_points = 16;
};

struct Panel {
  double lo;
  double hi;
  int points;
};

/// Composite Gauss-Legendre rule on a finite interval. Nodes are ascending and
/// grouped by panel; panel boundaries include every knot.
class PanelRule {
 public:
  PanelRule() = default;
  explicit PanelRule(std::vector<Panel> panels);

  std::span<const Panel> panels() const { return panels_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// Node index range [first, last) of panel p.
  std::pair<std::size_t, std::size_t> node_range(std::size_t p) const {
    return {offsets_[p], offsets_[p + 1]};
  }
  std::size_t size() const { return nodes_.size(); }
  double lo() const { return panels_.empty() ? 0.0 : panels_.front().lo; }
  double hi() const { return panels_.empty() ? 0.0 : panels_.back().hi; }

  template <class Fn>
  auto integrate(Fn&& f) const {
    using Scalar = std::decay_t<decltype(f(0.0))>;
    Scalar sum{0};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<Panel> panels_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<std::size_t> offsets_;
};

/// Panels on [lo, hi]: `scheme.panels` equal panels split at every knot inside
/// the interval, with geometric grading toward the flagged ends.
PanelRule build_rule(double lo, double hi, const QuadratureScheme& scheme,
                     bool grade_lo = false, bool grade_hi = false);

/// Rule over the truncated support of `d`, with its atoms as knots and grading
/// toward singular density endpoints.
PanelRule rule_for(const Distribution& d, const QuadratureScheme& scheme = {});

/// E g(X): exact sum over atoms for atomic laws, density quadrature otherwise.
template <class Fn>
auto expectation(const Distribution& d, Fn&& g, const QuadratureScheme& scheme = {}) {
  using Scalar = std::decay_t<decltype(g(0.0))>;
  if (d.is_atomic()) {
    Scalar sum{0};
    for (const Atom& a : d.atoms()) sum += a.weight * g(a.x);
    return sum;
  }
  const PanelRule rule = rule_for(d, scheme);
  return rule.integrate([&](double x) { return d.pdf(x) * g(x); });
}

}  // namespace hoeffding
