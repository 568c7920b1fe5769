#pragma once

#include <complex>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hoeffding/distribution.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

/// The Höffding kernel H(x,y) = F(min(x,y)) (1 - F(max(x,y))) of a law.
class KernelSurface {
 public:
  explicit KernelSurface(Distribution source) : source_(std::move(source)) {}

  const Distribution& source() const { return source_; }
  Support domain() const { return source_.support(); }

  double operator()(double x, double y) const {
    return x <= y ? source_.cdf(x) * source_.survival(y) : source_.cdf(y) * source_.survival(x);
  }

 private:
  Distribution source_;
};

inline double kernel_eval(const KernelSurface& k, double x, double y) { return k(x, y); }

/// Double integral of a(x) b(y) H(x,y) over the square of a panel rule.
///
/// Off the diagonal panels the kernel factorizes, H = F(x) S(y) for x < y, so
/// the tensor Gauss-Legendre sum collapses to per-panel sums. Each diagonal
/// panel is split along x = y into two triangles integrated with a collapsed
/// tensor rule, where H is smooth. CDF values are cached at construction.
class HoeffdingQuadrature {
 public:
  HoeffdingQuadrature(const Distribution& d, PanelRule rule);
  HoeffdingQuadrature(const Distribution& d, const QuadratureScheme& scheme = {})
      : HoeffdingQuadrature(d, rule_for(d, scheme)) {}

  const PanelRule& rule() const { return rule_; }

  template <class A, class B>
  auto integrate(A&& a, B&& b) const {
    using Scalar = std::decay_t<decltype(a(0.0) * b(0.0))>;
    const auto nodes = rule_.nodes();
    const auto weights = rule_.weights();
    const std::size_t n = nodes.size();
    std::vector<decltype(a(0.0))> av(n);
    std::vector<decltype(b(0.0))> bv(n);
    for (std::size_t i = 0; i < n; ++i) {
      av[i] = a(nodes[i]);
      bv[i] = b(nodes[i]);
    }

    Scalar total{0};
    using SA = std::decay_t<decltype(a(0.0))>;
    using SB = std::decay_t<decltype(b(0.0))>;
    SA cum_af{0};
    SB cum_bf{0};
    std::size_t tri = 0;
    for (std::size_t p = 0; p < rule_.panels().size(); ++p) {
      const auto [first, last] = rule_.node_range(p);
      SA af{0}, as{0};
      SB bf{0}, bs{0};
      for (std::size_t i = first; i < last; ++i) {
        af += weights[i] * cdf_[i] * av[i];
        as += weights[i] * sf_[i] * av[i];
        bf += weights[i] * cdf_[i] * bv[i];
        bs += weights[i] * sf_[i] * bv[i];
      }
      total += cum_af * bs + cum_bf * as;
      cum_af += af;
      cum_bf += bf;

      // Lower triangle x < y; the upper one is its mirror image.
      const std::size_t q = last - first;
      for (std::size_t j = 0; j < q; ++j) {
        const std::size_t iy = first + j;
        for (std::size_t k = 0; k < q; ++k, ++tri) {
          const double x = tri_x_[tri];
          total += tri_w_[tri] * (a(x) * bv[iy] + av[iy] * b(x));
        }
      }
    }
    return total;
  }

 private:
  PanelRule rule_;
  std::vector<double> cdf_;
  std::vector<double> sf_;
  // Collapsed-rule nodes of all diagonal triangles; weights include F(x) S(y).
  std::vector<double> tri_x_;
  std::vector<double> tri_w_;
};

/// Total mass of the Höffding measure, equal to Var(X).
double total_mass(const KernelSurface& k, const QuadratureScheme& scheme = {});

/// lambda(A x B) for intervals A = [a_lo, a_hi], B = [b_lo, b_hi].
double rectangle_measure(const KernelSurface& k, double a_lo, double a_hi, double b_lo,
                         double b_hi, const QuadratureScheme& scheme = {});

/// M(i,j) = H(x_i, x_j).
Eigen::MatrixXd gram_matrix(const KernelSurface& k, std::span<const double> points);

/// Materialized kernel values on a rectangular grid, rows indexed by xs.
Eigen::MatrixXd kernel_grid(const KernelSurface& k, std::span<const double> xs,
                            std::span<const double> ys);

/// Eigenvalue floor for Gram PSD checks.
inline double psd_tolerance(Eigen::Index n) { return 1e-10 * static_cast<double>(n); }

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

/// d(x,y) = sqrt(H(x,x) - 2H(x,y) + H(y,y)).
double pseudometric(const KernelSurface& k, double x, double y);

/// Fourier-Stieltjes transform of the Höffding measure. Uses the closed form
/// (f(t)f(s) - f(t+s))/(ts) when t,s != 0 and quadrature otherwise.
std::complex<double> fourier_lambda_hat(const KernelSurface& k, double t, double s,
                                        const QuadratureScheme& scheme = {});

/// The same transform by double quadrature of exp(i(tx+sy)) against H.
std::complex<double> fourier_lambda_hat_quadrature(const KernelSurface& k, double t, double s,
                                                   const QuadratureScheme& scheme = {});

inline constexpr double kFourierTolerance = 1e-6;
inline constexpr double kMaxFourierFrequency = 50.0;

}  // namespace hoeffding
