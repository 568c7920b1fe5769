#include "hoeffding/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hoeffding/error.hpp"
#include "hoeffding/kernel.hpp"

namespace hoeffding {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smooth transition from 0 (t <= 0) to 1 (t >= 1).
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double bump(double x, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double r = (x - 0.5 * (lo + hi)) / half;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

// Integral of f over [a, b] by composite Gauss-Legendre (8 panels x 24 points).
template <class Fn>
double smooth_integral(Fn&& f, double a, double b) {
  if (a == b) return 0.0;
  const GaussRule& g = gauss_legendre(24);
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
      sum += 0.5 * h * g.weights[k] * f(mid + 0.5 * h * g.nodes[k]);
  }
  return sum;
}

std::string format_short(double v) {
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

QuadratureScheme with_support_knots(QuadratureScheme scheme, const TestFunction& u) {
  if (u.derivative_support) {
    scheme.knots.push_back(u.derivative_support->lo);
    scheme.knots.push_back(u.derivative_support->hi);
  }
  return scheme;
}

}  // namespace

namespace testfn {

TestFunction constant(double c) {
  return {"const(" + format_short(c) + ")", [c](double) { return c; }, [](double) { return 0.0; },
          true, Interval{0.0, 0.0}};
}

TestFunction monomial(int power) {
  if (power < 1) throw Error(ErrorKind::InvalidArgument, "monomial power must be >= 1");
  const std::string name = power == 1 ? "x" : "x^" + std::to_string(power);
  return {name, [power](double x) { return std::pow(x, power); },
          [power](double x) { return power * std::pow(x, power - 1); }, false, std::nullopt};
}

TestFunction windowed_monomial(int power, double lo, double hi, double ramp) {
  if (power < 1 || !(hi > lo) || !(ramp > 0.0))
    throw Error(ErrorKind::InvalidArgument, "invalid windowed monomial");
  const auto window = [=](double x) {
    return smooth_step((x - (lo - ramp)) / ramp) * smooth_step(((hi + ramp) - x) / ramp);
  };
  const auto deriv = [=](double x) { return power * std::pow(x, power - 1) * window(x); };
  const auto value = [=](double x) {
    if (x < lo) {
      const double from = std::max(x, lo - ramp);
      return std::pow(lo, power) - smooth_integral(deriv, from, lo);
    }
    if (x > hi) {
      const double to = std::min(x, hi + ramp);
      return std::pow(hi, power) + smooth_integral(deriv, hi, to);
    }
    return std::pow(x, power);
  };
  const std::string base = power == 1 ? "x" : "x^" + std::to_string(power);
  return {base + "[" + format_short(lo) + "," + format_short(hi) + "]", value, deriv, false,
          Interval{lo - ramp, hi + ramp}};
}

TestFunction sine(int k) {
  const double w = kTwoPi * k;
  return {"sin(2pi*" + std::to_string(k) + "x)", [w](double x) { return std::sin(w * x); },
          [w](double x) { return w * std::cos(w * x); }, true, std::nullopt};
}

TestFunction cosine(int k) {
  const double w = kTwoPi * k;
  return {"cos(2pi*" + std::to_string(k) + "x)", [w](double x) { return std::cos(w * x); },
          [w](double x) { return -w * std::sin(w * x); }, true, std::nullopt};
}

TestFunction bump_integral(double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "bump support must be non-empty");
  const auto raw = [lo, hi](double x) { return bump(x, lo, hi); };
  const double mass = smooth_integral(raw, lo, hi);
  const auto deriv = [=](double x) { return raw(x) / mass; };
  const auto value = [=](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return smooth_integral(deriv, lo, x);
  };
  return {"bump[" + format_short(lo) + "," + format_short(hi) + "]", value, deriv, false,
          Interval{lo, hi}};
}

}  // namespace testfn

std::vector<TestFunction> test_library(bool periodic_only, std::optional<Interval> window) {
  std::vector<TestFunction> lib;
  if (!periodic_only) {
    for (int p = 1; p <= 3; ++p) {
      if (window) {
        const double ramp = 0.25 * (window->hi - window->lo);
        lib.push_back(testfn::windowed_monomial(p, window->lo, window->hi, ramp));
      } else {
        lib.push_back(testfn::monomial(p));
      }
    }
  }
  for (int k = 1; k <= 5; ++k) {
    lib.push_back(testfn::sine(k));
    lib.push_back(testfn::cosine(k));
  }
  if (!periodic_only) lib.push_back(testfn::bump_integral());
  return lib;
}

std::vector<TestFunction> test_library_for(const Distribution& d, bool periodic_only) {
  const Support s = d.support();
  if (std::isfinite(s.lo) && std::isfinite(s.hi)) return test_library(periodic_only);
  const Moments m = d.moments();
  const double sd = std::sqrt(m.variance);
  return test_library(periodic_only, Interval{m.mean - 4.0 * sd, m.mean + 4.0 * sd});
}

bool is_periodic(const TestFunction& u, double tol) {
  return std::abs(u.value(0.0) - u.value(1.0)) <= tol &&
         std::abs(u.derivative(0.0) - u.derivative(1.0)) <= tol *
                                                               std::max(1.0, std::abs(u.derivative(0.0)));
}

void require_periodic(const TestFunction& u) {
  if (!is_periodic(u))
    throw Error(ErrorKind::NonPeriodicFunction, "'" + u.name + "' is not 1-periodic");
}

double direct_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                         const QuadratureScheme& scheme) {
  // The mass cut off by tail truncation sits at the cut points; exact when u, v
  // are constant out there, as windowed test functions are.
  const Support cut = d.truncated_support(scheme.tail_eps);
  const double lo_mass = d.has_density() && cut.lo > d.support().lo ? d.cdf(cut.lo) : 0.0;
  const double hi_mass = d.has_density() && cut.hi < d.support().hi ? d.survival(cut.hi) : 0.0;
  const auto mean_of = [&](auto&& g) {
    double m = expectation(d, g, scheme);
    if (lo_mass > 0.0) m += lo_mass * g(cut.lo);
    if (hi_mass > 0.0) m += hi_mass * g(cut.hi);
    return m;
  };
  const double second_u = mean_of([&](double x) { return u(x) * u(x); });
  const double second_v = mean_of([&](double x) { return v(x) * v(x); });
  if (!std::isfinite(second_u) || !std::isfinite(second_v))
    throw Error(ErrorKind::DivergentMoment, "u(X) or v(X) is not square integrable");
  // Evaluate once per node and centre before the product to avoid cancellation.
  const double mu = mean_of([&](double x) { return u(x); });
  const double mv = mean_of([&](double x) { return v(x); });
  return mean_of([&](double x) { return (u(x) - mu) * (v(x) - mv); });
}

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

McEstimate mc_covariance(std::span<const double> sample, const TestFunction& u,
                         const TestFunction& v, std::uint64_t seed) {
  const std::size_t n = sample.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least two draws");
  std::vector<double> us(n), vs(n);
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    us[i] = u(sample[i]);
    vs[i] = v(sample[i]);
    mu += us[i];
    mv += vs[i];
  }
  mu /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double suv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    us[i] -= mu;
    vs[i] -= mv;
    suv += us[i] * vs[i];
  }
  const double dn = static_cast<double>(n);
  const double estimate = suv / dn;

  // Leave-one-out plug-in covariances of the centred data, in O(n).
  double loo_mean = 0.0;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = us[i] * vs[i];
    loo[i] = (suv - p) / (dn - 1.0) - p / ((dn - 1.0) * (dn - 1.0));
    loo_mean += loo[i];
  }
  loo_mean /= dn;
  double ss = 0.0;
  for (double l : loo) ss += (l - loo_mean) * (l - loo_mean);
  return {estimate, std::sqrt((dn - 1.0) / dn * ss), seed};
}

McEstimate mc_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                         std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  const std::vector<double> sample = d.sample(rng, n);
  return mc_covariance(sample, u, v, seed);
}

double integrability_check(const Distribution& d, const TestFunction& u,
                           const QuadratureScheme& scheme) {
  const auto abs_deriv = [&](double x) { return std::abs(u.derivative(x)); };
  const QuadratureScheme base = with_support_knots(scheme, u);
  QuadratureScheme refined = base;
  refined.panels *= 2;
  refined.tail_eps = std::max(scheme.tail_eps * scheme.tail_eps, 1e-300);
  refined.grading_levels += 8;
  const double coarse = HoeffdingQuadrature(d, base).integrate(abs_deriv, abs_deriv);
  const double fine = HoeffdingQuadrature(d, refined).integrate(abs_deriv, abs_deriv);
  // |u'| has kinks, so agreement is only O(h^2); a divergent integral moves by
  // orders of magnitude when the tails are extended.
  if (!std::isfinite(coarse) || !std::isfinite(fine) ||
      std::abs(fine - coarse) > 1e-3 * std::max(1.0, std::abs(fine)))
    throw Error(ErrorKind::IntegrabilityViolation,
                "double integral of |u'(x)||u'(y)| H for '" + u.name + "' does not converge");
  return fine;
}

double hoeffding_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                            const QuadratureScheme& scheme) {
  integrability_check(d, u, scheme);
  if (&u != &v) integrability_check(d, v, scheme);
  const QuadratureScheme local = with_support_knots(with_support_knots(scheme, u), v);
  return HoeffdingQuadrature(d, local).integrate([&](double x) { return u.derivative(x); },
                                                  [&](double y) { return v.derivative(y); });
}

}  // namespace hoeffding
