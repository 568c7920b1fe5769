#include "hoeffding/kernel.hpp"

#include <cmath>

#include "hoeffding/error.hpp"

namespace hoeffding {

HoeffdingQuadrature::HoeffdingQuadrature(const Distribution& d, PanelRule rule)
    : rule_(std::move(rule)) {
  const auto nodes = rule_.nodes();
  const auto weights = rule_.weights();
  cdf_.resize(nodes.size());
  sf_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    cdf_[i] = d.cdf(nodes[i]);
    sf_[i] = d.survival(nodes[i]);
  }
  for (std::size_t p = 0; p < rule_.panels().size(); ++p) {
    const Panel& panel = rule_.panels()[p];
    const GaussRule& g = gauss_legendre(panel.points);
    const auto [first, last] = rule_.node_range(p);
    for (std::size_t j = first; j < last; ++j) {
      const double y = nodes[j];
      const double span = y - panel.lo;
      for (int k = 0; k < panel.points; ++k) {
        const double x = panel.lo + span * 0.5 * (g.nodes[k] + 1.0);
        const double w = weights[j] * span * 0.5 * g.weights[k];
        tri_x_.push_back(x);
        tri_w_.push_back(w * d.cdf(x) * sf_[j]);
      }
    }
  }
}

double total_mass(const KernelSurface& k, const QuadratureScheme& scheme) {
  const HoeffdingQuadrature quad(k.source(), scheme);
  const auto one = [](double) { return 1.0; };
  return quad.integrate(one, one);
}

double rectangle_measure(const KernelSurface& k, double a_lo, double a_hi, double b_lo,
                         double b_hi, const QuadratureScheme& scheme) {
  QuadratureScheme local = scheme;
  local.knots.insert(local.knots.end(), {a_lo, a_hi, b_lo, b_hi});
  const HoeffdingQuadrature quad(k.source(), local);
  return quad.integrate([&](double x) { return (x >= a_lo && x <= a_hi) ? 1.0 : 0.0; },
                        [&](double y) { return (y >= b_lo && y <= b_hi) ? 1.0 : 0.0; });
}

Eigen::MatrixXd gram_matrix(const KernelSurface& k, std::span<const double> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = k(points[i], points[j]);
  return m;
}

Eigen::MatrixXd kernel_grid(const KernelSurface& k, std::span<const double> xs,
                            std::span<const double> ys) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = k(xs[i], ys[j]);
  return m;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double pseudometric(const KernelSurface& k, double x, double y) {
  if (y < x) std::swap(x, y);
  const double radicand = k(x, x) - 2.0 * k(x, y) + k(y, y);
  if (radicand < -1e-12)
    throw Error(ErrorKind::NegativeRadicand,
                "pseudometric radicand " + std::to_string(radicand) + " is negative");
  return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

std::complex<double> fourier_lambda_hat_quadrature(const KernelSurface& k, double t, double s,
                                                   const QuadratureScheme& scheme) {
  using namespace std::complex_literals;
  if (std::abs(t) > kMaxFourierFrequency || std::abs(s) > kMaxFourierFrequency)
    throw Error(ErrorKind::InvalidArgument, "frequency exceeds the supported range |t| <= 50");
  const HoeffdingQuadrature quad(k.source(), scheme);
  return quad.integrate([t](double x) { return std::exp(1i * (t * x)); },
                        [s](double y) { return std::exp(1i * (s * y)); });
}

std::complex<double> fourier_lambda_hat(const KernelSurface& k, double t, double s,
                                        const QuadratureScheme& scheme) {
  if (t == 0.0 || s == 0.0) return fourier_lambda_hat_quadrature(k, t, s, scheme);
  const Distribution& d = k.source();
  const auto ft = d.characteristic_function(t);
  const auto fs = d.characteristic_function(s);
  const auto fts = d.characteristic_function(t + s);
  return (ft * fs - fts) / (t * s);
}

}  // namespace hoeffding
