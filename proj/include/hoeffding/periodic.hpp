#pragma once

#include <complex>
#include <functional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hoeffding/distribution.hpp"
#include "hoeffding/kernel.hpp"
#include "hoeffding/marginal.hpp"
#include "hoeffding/oracle.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

/// D(h) = (1 - 4h(1 - h)) / 8 on [0, 1].
inline double mixing_profile(double h) { return 0.125 * (1.0 - 4.0 * h * (1.0 - h)); }

/// Closed-form mixing density for the uniform law on (0,1): D(|x-y|) + (c - 1/24).
inline double uniform_mixing_density(double c, double x, double y) {
  return mixing_profile(std::abs(x - y)) + (c - 1.0 / 24.0);
}

/// Double integral of a(x) b(y) K(x,y) over [lo,hi]^2 of a panel rule, for a
/// symmetric kernel that is smooth on either side of the diagonal. Tensor
/// Gauss-Legendre off the diagonal panels, collapsed rules on the triangles.
template <class Kernel, class A, class B>
auto integrate_square(const PanelRule& rule, Kernel&& kernel, A&& a, B&& b) {
  using Scalar = std::decay_t<decltype(a(0.0) * b(0.0) * kernel(0.0, 0.0))>;
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  const std::size_t n = nodes.size();
  std::vector<std::size_t> panel_of(n);
  for (std::size_t p = 0; p < rule.panels().size(); ++p) {
    const auto [first, last] = rule.node_range(p);
    for (std::size_t i = first; i < last; ++i) panel_of[i] = p;
  }
  Scalar total{0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = a(nodes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (panel_of[i] == panel_of[j]) continue;
      total += weights[i] * weights[j] * ai * b(nodes[j]) * kernel(nodes[i], nodes[j]);
    }
  }
  for (std::size_t p = 0; p < rule.panels().size(); ++p) {
    const Panel& panel = rule.panels()[p];
    const GaussRule& g = gauss_legendre(panel.points);
    const auto [first, last] = rule.node_range(p);
    for (std::size_t j = first; j < last; ++j) {
      const double y = nodes[j];
      const double span = y - panel.lo;
      for (int k = 0; k < panel.points; ++k) {
        const double x = panel.lo + span * 0.5 * (g.nodes[k] + 1.0);
        const double w = weights[j] * span * 0.5 * g.weights[k];
        total += w * (a(x) * b(y) + a(y) * b(x)) * kernel(x, y);
      }
    }
  }
  return total;
}

/// A finite signed measure on [0,1): a linear combination of atoms, scaled
/// probability laws and densities.
class SignedMeasure {
 public:
  struct Atoms {
    std::vector<Atom> atoms;
  };
  struct Scaled {
    double weight;
    Distribution law;
  };
  struct Density {
    std::string name;
    std::function<double(double)> density;
    Interval support;
  };
  using Term = std::variant<Atoms, Scaled, Density>;

  SignedMeasure() = default;
  static SignedMeasure zero() { return {}; }
  static SignedMeasure atoms(std::vector<Atom> atoms);
  static SignedMeasure scaled(double weight, Distribution law);
  /// weight * m, with m uniform on (0,1).
  static SignedMeasure uniform(double weight = 1.0);
  static SignedMeasure density(std::string name, std::function<double(double)> density,
                               Interval support = {0.0, 1.0});

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator*(double factor) const;

  std::span<const Term> terms() const { return terms_; }
  double total_mass() const;
  double integrate(const std::function<double(double)>& f) const;
  std::string describe() const;

 private:
  std::vector<Term> terms_;
};

/// Linear combination of 1-3 random terms drawn from atoms, scaled beta and
/// uniform laws and quadratic densities, all on [0,1).
SignedMeasure random_signed_measure(Rng& rng);

/// The unique mixing measure with marginal c*mu:
/// lambda_mu + (var - c) m x m + c (mu x m + m x mu) - (Lambda_mu x m + m x Lambda_mu).
class MixingMeasure {
 public:
  MixingMeasure(Distribution source, double c, const QuadratureScheme& scheme = {});

  const Distribution& source() const { return source_; }
  double c() const { return c_; }
  double variance() const { return variance_; }
  const QuadratureScheme& scheme() const { return scheme_; }

  /// Coefficient of m x m.
  double uniform_product_coefficient() const { return variance_ - c_; }

  struct Parts {
    double hoeffding;
    double uniform_product;
    double source_cross;
    double marginal_cross;
    double total() const { return hoeffding + uniform_product + source_cross + marginal_cross; }
  };

  /// int int a(x) b(y) d lambda, each component integrated separately: double
  /// quadrature for lambda_mu, products of one-dimensional integrals otherwise.
  template <class A, class B>
  auto integrate(A&& a, B&& b, const std::vector<double>& knots = {}) const {
    QuadratureScheme local = scheme_;
    local.knots.insert(local.knots.end(), knots.begin(), knots.end());
    const auto kernel_part = HoeffdingQuadrature(source_, local).integrate(a, b);
    const auto [ma, ea, la] = linear_functionals(a, local);
    const auto [mb, eb, lb] = linear_functionals(b, local);
    return kernel_part + (variance_ - c_) * ma * mb + c_ * (ea * mb + ma * eb) -
           (la * mb + ma * lb);
  }

  /// Same, split by component (real integrands).
  Parts integrate_parts(const std::function<double(double)>& a,
                        const std::function<double(double)>& b,
                        const std::vector<double>& knots = {}) const;

  /// lambda(A x [0,1)) for A = [lo, hi].
  double marginal_mass(double lo, double hi) const;

  /// Integrals of f against m, mu and Lambda_mu.
  template <class Fn>
  auto linear_functionals(Fn&& f, const QuadratureScheme& local) const {
    using Scalar = std::decay_t<decltype(f(0.0))>;
    const PanelRule unit = build_rule(0.0, 1.0, local);
    const Scalar against_m = unit.integrate(f);
    const Scalar against_mu = expectation(source_, f, local);
    const PanelRule support = rule_for(source_, local);
    const Scalar against_marginal =
        support.integrate([&](double x) { return marginal_density(source_, x) * f(x); });
    return std::tuple<Scalar, Scalar, Scalar>{against_m, against_mu, against_marginal};
  }

 private:
  Distribution source_;
  double c_;
  double variance_;
  QuadratureScheme scheme_;
};

/// Checks the support lies in [0,1) and builds the measure.
MixingMeasure build_mixing(const Distribution& d, double c, const QuadratureScheme& scheme = {});

/// psi(x,y) = H(x,y) + (var - c) + c (p(x) + p(y)) - (h(x) + h(y)).
double mixing_density(const MixingMeasure& mm, double x, double y);

/// Minimum of psi over the (i + 1/2)/n midpoint grid of (0,1)^2.
double mixing_grid_minimum(const Distribution& d, double c, int grid = 400);

/// Smallest c >= 0 with grid minimum of psi >= -1e-9, by bisection to 1e-6.
double nonnegativity_threshold(const Distribution& d, int grid = 400);

/// (sigma - sigma^2) / (2 alpha - 1) for a density bounded below by alpha > 1/2.
double sufficient_c(const Distribution& d, double alpha);

struct IdentityCheck {
  double lhs;  // cov_mu(u, v)
  double rhs;  // int int u'(x) v'(y) d lambda
  double residual;
};

IdentityCheck verify_periodic_identity(const MixingMeasure& mm, const TestFunction& u,
                                       const TestFunction& v);

/// int int exp(2 pi i (k x + l y)) d lambda.
std::complex<double> fourier_coefficient(const MixingMeasure& mm, int k, int l);

/// |f(k+l) - f(k) f(l) + (2 pi)^2 k l lambda_hat(k,l)| with f(n) = E exp(2 pi i n X).
double fourier_residual(const MixingMeasure& mm, int k, int l);

/// lambda_mu + Lambda1 x m + m x Lambda2.
struct GeneralMixing {
  Distribution source;
  SignedMeasure left;
  SignedMeasure right;
};

IdentityCheck general_mixing_check(const GeneralMixing& g, const TestFunction& u,
                                   const TestFunction& v, const QuadratureScheme& scheme = {});

/// Residual of the periodic identity for lambda_mu + Lambda1 x m + m x Lambda2.
double general_mixing_invariance(const Distribution& d, const SignedMeasure& left,
                                 const SignedMeasure& right, const TestFunction& u,
                                 const TestFunction& v);

/// Density of the mixing measure for the uniform law on (0,T):
/// D(|x/T - y/T|) + (c - 1/24). `mm` must have the uniform (0,1) source.
double rescale_to_T(const MixingMeasure& mm, double period, double x, double y);

/// cov_{m_T}(u,v) against int_0^T int_0^T u'(x) v'(y) d lambda_T for T-periodic u, v.
IdentityCheck verify_rescaled_identity(double c, double period, const TestFunction& u,
                                       const TestFunction& v);

}  // namespace hoeffding
