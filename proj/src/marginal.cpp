#include "hoeffding/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "hoeffding/error.hpp"

namespace hoeffding {

namespace {

void require_finite_mean(const Distribution& d) {
  if (!std::isfinite(d.mean()))
    throw Error(ErrorKind::DivergentMoment, "marginal density is infinite when E|X| is infinite");
}

void require_density(const Distribution& d) {
  if (!d.has_density())
    throw Error(ErrorKind::NoDensity, d.describe() + " has no density");
}

}  // namespace

double marginal_density(const Distribution& d, double x) {
  require_finite_mean(d);
  if (d.has_density()) {
    // Closed forms per family: quadrature of F loses ~1e-9 deep in the tails.
    return std::max(0.0, d.upper_centered_moment(x));
  }
  return marginal_density_cdf_form(d, x);
}

double marginal_density_cdf_form(const Distribution& d, double x, const QuadratureScheme& scheme) {
  require_finite_mean(d);
  const double fx = d.cdf(x);
  const double sx = d.survival(x);
  if (d.is_atomic()) {
    double below = 0.0, above = 0.0;
    for (const Atom& a : d.atoms()) {
      if (a.x <= x)
        below += a.weight * (x - a.x);
      else
        above += a.weight * (a.x - x);
    }
    return sx * below + fx * above;
  }
  const Support s = d.truncated_support(scheme.tail_eps);
  if (x <= s.lo || x >= s.hi) return 0.0;
  const PanelRule left = build_rule(s.lo, x, scheme, d.density_singular_lo(), false);
  const PanelRule right = build_rule(x, s.hi, scheme, false, d.density_singular_hi());
  const double below = left.integrate([&](double y) { return d.cdf(y); });
  const double above = right.integrate([&](double y) { return d.survival(y); });
  return sx * below + fx * above;
}

double stein_kernel(const Distribution& d, double x) {
  require_density(d);
  const double p = d.pdf(x);
  if (!(p > kDensityFloor))
    throw Error(ErrorKind::ZeroDensity, "density vanishes at x = " + std::to_string(x));
  return marginal_density(d, x) / p;
}

namespace {

// tau(x) where the density is above the floor, 0 elsewhere (a null set of the law).
double stein_kernel_or_zero(const Distribution& d, double x) {
  const double p = d.pdf(x);
  if (!(p > kDensityFloor) || !std::isfinite(p)) return 0.0;
  return marginal_density(d, x) / p;
}

}  // namespace

double stein_identity_residual(const Distribution& d, const TestFunction& u,
                               const QuadratureScheme& scheme) {
  require_density(d);
  const TestFunction identity = testfn::monomial(1);
  QuadratureScheme local = scheme;
  if (u.derivative_support) {
    local.knots.push_back(u.derivative_support->lo);
    local.knots.push_back(u.derivative_support->hi);
  }
  const double lhs = direct_covariance(d, identity, u, local);
  const double rhs = expectation(
      d, [&](double x) { return stein_kernel_or_zero(d, x) * u.derivative(x); }, local);
  return std::abs(lhs - rhs);
}

double gaussian_tv_bound(const Distribution& d, const QuadratureScheme& scheme) {
  require_density(d);
  const double m = d.mean();
  if (!std::isfinite(d.variance()))
    throw Error(ErrorKind::DivergentMoment, "second moment is infinite");
  const double spread =
      expectation(d, [&](double x) { return std::abs(stein_kernel_or_zero(d, x) - 1.0); }, scheme);
  return 4.0 * spread + 4.0 * std::abs(1.0 - m);
}

double gaussian_characterization_residual(const Distribution& d, int probes) {
  require_density(d);
  if (probes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two probes");
  const double var = d.variance();
  if (!std::isfinite(var)) throw Error(ErrorKind::DivergentMoment, "second moment is infinite");
  const Support s = d.truncated_support();
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const double x = s.lo + (s.hi - s.lo) * i / (probes - 1.0);
    const double p = d.pdf(x);
    if (!std::isfinite(p)) continue;
    worst = std::max(worst, std::abs(marginal_density(d, x) - var * p));
  }
  return worst;
}

}  // namespace hoeffding
