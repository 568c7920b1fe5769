#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hoeffding/distribution.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

struct Interval {
  double lo;
  double hi;
};

/// A smooth function with its derivative, as used on both sides of the
/// covariance identities.
struct TestFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool periodic = false;
  /// Where the derivative may be non-zero, when compact.
  std::optional<Interval> derivative_support;

  double operator()(double x) const { return value(x); }
};

namespace testfn {
TestFunction constant(double c);
TestFunction monomial(int power);
/// x^power on [lo, hi], with a C-infinity cutoff of the derivative over a ramp
/// of the given width on each side; constant beyond.
TestFunction windowed_monomial(int power, double lo, double hi, double ramp);
/// sin(2 pi k x) and cos(2 pi k x).
TestFunction sine(int k);
TestFunction cosine(int k);
/// Antiderivative of a smooth bump supported on [lo, hi], normalized to rise from 0 to 1.
TestFunction bump_integral(double lo = 0.25, double hi = 0.75);
}  // namespace testfn

/// Polynomials x, x^2, x^3, sin/cos(2 pi k x) for k <= 5, and a bump integral.
/// With a window, the polynomials get compactly supported derivatives.
std::vector<TestFunction> test_library(bool periodic_only,
                                       std::optional<Interval> window = std::nullopt);

/// The library with polynomial windows [m - 4 sd, m + 4 sd] when `d` has unbounded support.
std::vector<TestFunction> test_library_for(const Distribution& d, bool periodic_only = false);

/// u(0) = u(1) and u'(0) = u'(1) within tol.
bool is_periodic(const TestFunction& u, double tol = 1e-12);
/// Throws NonPeriodicFunction unless `is_periodic(u)`.
void require_periodic(const TestFunction& u);

/// cov(u(X), v(X)) by single-variable quadrature, or exact sums over atoms.
double direct_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                         const QuadratureScheme& scheme = {});

struct McEstimate {
  double estimate;
  double standard_error;
  std::uint64_t seed;
};

/// Independent generator for stream `index` of a master seed.
Rng make_stream(std::uint64_t seed, std::uint64_t index = 0);

/// Plug-in covariance with jackknife standard error; deterministic in `seed`.
McEstimate mc_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                         std::size_t n, std::uint64_t seed);
/// Same estimator over an already drawn sample.
McEstimate mc_covariance(std::span<const double> sample, const TestFunction& u,
                         const TestFunction& v, std::uint64_t seed = 0);

/// Double integral of |u'(x)| |u'(y)| H(x,y); throws IntegrabilityViolation when
/// it is not finite or does not settle under refinement of the quadrature.
double integrability_check(const Distribution& d, const TestFunction& u,
                           const QuadratureScheme& scheme = {});

/// Double quadrature of u'(x) v'(y) H(x,y).
double hoeffding_covariance(const Distribution& d, const TestFunction& u, const TestFunction& v,
                            const QuadratureScheme& scheme = {});

}  // namespace hoeffding
