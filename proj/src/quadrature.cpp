#include "hoeffding/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "hoeffding/error.hpp"

namespace hoeffding {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0, p1 = x;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
  return *slot;
}

PanelRule::PanelRule(std::vector<Panel> panels) : panels_(std::move(panels)) {
  offsets_.reserve(panels_.size() + 1);
  offsets_.push_back(0);
  for (const Panel& p : panels_) {
    const GaussRule& g = gauss_legendre(p.points);
    const double half = 0.5 * (p.hi - p.lo);
    const double mid = 0.5 * (p.hi + p.lo);
    for (int k = 0; k < p.points; ++k) {
      nodes_.push_back(mid + half * g.nodes[k]);
      weights_.push_back(half * g.weights[k]);
    }
    offsets_.push_back(nodes_.size());
  }
}

PanelRule build_rule(double lo, double hi, const QuadratureScheme& scheme, bool grade_lo,
                     bool grade_hi) {
  if (!(hi > lo)) return PanelRule{};
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::InvalidArgument, "quadrature interval must be finite");

  std::vector<double> inner;
  for (double k : scheme.knots)
    if (k > lo && k < hi) inner.push_back(k);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());

  const bool sparse = static_cast<int>(inner.size()) > scheme.panels;
  std::vector<double> breaks{lo, hi};
  if (!sparse) {
    for (int p = 1; p < scheme.panels; ++p)
      breaks.push_back(lo + (hi - lo) * static_cast<double>(p) / scheme.panels);
  }
  breaks.insert(breaks.end(), inner.begin(), inner.end());
  std::sort(breaks.begin(), breaks.end());
  // Drop breakpoints closer than a few ulps; they would create empty panels.
  std::vector<double> cleaned;
  for (double b : breaks) {
    if (cleaned.empty() || b - cleaned.back() > 8.0 * std::numeric_limits<double>::epsilon() *
                                                     std::max(1.0, std::abs(b)))
      cleaned.push_back(b);
    else
      cleaned.back() = b == hi ? hi : cleaned.back();
  }
  if (cleaned.back() != hi) cleaned.push_back(hi);

  const int points = sparse ? scheme.sparse_points : scheme.points;
  // Geometric refinement of [a, b] toward one end. Stops before panel widths
  // reach the floating resolution of the endpoint so no node coincides with it.
  auto graded = [&](double a, double b, bool toward_lo, std::vector<Panel>& out) {
    const double floor_width = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max({1.0, std::abs(a), std::abs(b)});
    std::vector<double> widths;
    double w = b - a;
    for (int lev = 0; lev < scheme.grading_levels && w * scheme.grading_ratio > floor_width;
         ++lev) {
      w *= scheme.grading_ratio;
      widths.push_back(w);
    }
    std::vector<double> cuts{a, b};
    for (double width : widths) cuts.push_back(toward_lo ? a + width : b - width);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const bool outermost = toward_lo ? k + 2 == cuts.size() : k == 0;
      out.push_back({cuts[k], cuts[k + 1], outermost ? points : scheme.graded_points});
    }
  };

  std::vector<Panel> panels;
  const std::size_t last = cleaned.size() - 2;
  for (std::size_t i = 0; i + 1 < cleaned.size(); ++i) {
    const double a = cleaned[i];
    const double b = cleaned[i + 1];
    const bool left = grade_lo && i == 0;
    const bool right = grade_hi && i == last;
    if (left && right) {
      const double m = 0.5 * (a + b);
      graded(a, m, true, panels);
      graded(m, b, false, panels);
    } else if (left) {
      graded(a, b, true, panels);
    } else if (right) {
      graded(a, b, false, panels);
    } else {
      panels.push_back({a, b, points});
    }
  }
  return PanelRule(std::move(panels));
}

PanelRule rule_for(const Distribution& d, const QuadratureScheme& scheme) {
  const Support s = d.truncated_support(scheme.tail_eps);
  QuadratureScheme local = scheme;
  for (const Atom& a : d.atoms()) local.knots.push_back(a.x);
  if (d.is_atomic()) {
    return build_rule(s.lo, s.hi, local);
  }
  return build_rule(s.lo, s.hi, local, d.density_singular_lo(), d.density_singular_hi());
}

}  // namespace hoeffding
