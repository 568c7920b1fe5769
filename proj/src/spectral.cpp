#include "hoeffding/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "hoeffding/error.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

namespace {

void require_resolved(const SpectralDecomposition& s, Eigen::Index n) {
  if (n < 1 || n > s.size() || s.eigenvalues(n - 1) < kResolvedEigenvalue)
    throw Error(ErrorKind::IndexOutOfSpectrum,
                "mode " + std::to_string(n) + " is outside the resolved spectrum");
}

}  // namespace

SpectralDecomposition nystrom_decompose(const Distribution& d, int n_nodes) {
  if (n_nodes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two Nyström nodes");
  if (d.is_atomic())
    throw Error(ErrorKind::AtomicDistribution, d.describe() + " has atoms; F is not continuous");
  if (!std::isfinite(d.mean()))
    throw Error(ErrorKind::DivergentMoment, "Nyström discretization needs E|X| finite");

  const Support dom = d.truncated_support();
  const GaussRule& g = gauss_legendre(n_nodes);
  const double half = 0.5 * (dom.hi - dom.lo);
  const double mid = 0.5 * (dom.hi + dom.lo);

  SpectralDecomposition s{d, {}, {}, {}, {}, {}, {}};
  s.nodes.resize(n_nodes);
  s.weights.resize(n_nodes);
  s.cdf_at_nodes.resize(n_nodes);
  s.survival_at_nodes.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    s.nodes(i) = mid + half * g.nodes[i];
    s.weights(i) = half * g.weights[i];
    s.cdf_at_nodes(i) = d.cdf(s.nodes(i));
    s.survival_at_nodes(i) = d.survival(s.nodes(i));
  }

  const Eigen::VectorXd root_w = s.weights.cwiseSqrt();
  Eigen::MatrixXd a(n_nodes, n_nodes);
  for (int j = 0; j < n_nodes; ++j)
    for (int i = 0; i <= j; ++i)
      a(i, j) = a(j, i) = root_w(i) * s.cdf_at_nodes(i) * s.survival_at_nodes(j) * root_w(j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidArgument, "symmetric eigensolver did not converge");

  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenfunctions = solver.eigenvectors().rowwise().reverse();
  s.eigenfunctions = root_w.cwiseInverse().asDiagonal() * s.eigenfunctions;

  for (Eigen::Index n = 0; n < s.eigenfunctions.cols(); ++n) {
    auto f = s.eigenfunctions.col(n);
    const double scale = f.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (std::abs(f(i)) > 1e-6 * scale) {
        if (f(i) < 0.0) f = -f;
        break;
      }
    }
  }
  return s;
}

TraceReport trace_report(const SpectralDecomposition& s, std::size_t mc_pairs, std::uint64_t seed) {
  TraceReport r{};
  r.eigenvalue_sum = s.eigenvalues.sum();
  const Distribution& d = s.source;
  r.diagonal_integral =
      rule_for(d).integrate([&](double x) { return d.cdf(x) * d.survival(x); });
  Rng rng = make_stream(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < mc_pairs; ++i) {
    const double v = 0.5 * std::abs(d.sample(rng) - d.sample(rng));
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(mc_pairs);
  r.half_mean_abs_difference = sum / n;
  r.mc_standard_error = std::sqrt(std::max(0.0, sum_sq / n - r.half_mean_abs_difference *
                                                                 r.half_mean_abs_difference) /
                                  (n - 1.0));
  r.seed = seed;
  return r;
}

double trace_residual(const SpectralDecomposition& s) {
  const Distribution& d = s.source;
  const double integral =
      rule_for(d).integrate([&](double x) { return d.cdf(x) * d.survival(x); });
  return std::abs(s.eigenvalues.sum() - integral);
}

Eigen::MatrixXd extend_eigenfunctions(const SpectralDecomposition& s, std::span<const double> xs,
                                      Eigen::Index n_terms) {
  n_terms = std::clamp<Eigen::Index>(n_terms, 0, s.size());
  const auto n_nodes = s.nodes.size();
  Eigen::MatrixXd kernel_rows(static_cast<Eigen::Index>(xs.size()), n_nodes);
  for (Eigen::Index i = 0; i < kernel_rows.rows(); ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    const double fx = s.source.cdf(x);
    const double sx = s.source.survival(x);
    for (Eigen::Index j = 0; j < n_nodes; ++j) {
      const double h = x <= s.nodes(j) ? fx * s.survival_at_nodes(j) : s.cdf_at_nodes(j) * sx;
      kernel_rows(i, j) = s.weights(j) * h;
    }
  }
  Eigen::MatrixXd out = kernel_rows * s.eigenfunctions.leftCols(n_terms);
  for (Eigen::Index n = 0; n < n_terms; ++n) {
    const double alpha = s.eigenvalues(n);
    out.col(n) = alpha > kResolvedEigenvalue ? Eigen::VectorXd(out.col(n) / alpha)
                                             : Eigen::VectorXd::Zero(out.rows());
  }
  return out;
}

double mercer_reconstruct(const SpectralDecomposition& s, Eigen::Index n_terms, double x,
                          double y) {
  if (n_terms <= 0) return 0.0;
  const double pts[2] = {x, y};
  const Eigen::MatrixXd f = extend_eigenfunctions(s, pts, n_terms);
  const Eigen::Index m = f.cols();
  return (f.row(0).array() * f.row(1).array() * s.eigenvalues.head(m).transpose().array()).sum();
}

double sturm_liouville_residual(const SpectralDecomposition& s, Eigen::Index n) {
  if (!s.source.has_density()) throw Error(ErrorKind::NoDensity, s.source.describe());
  require_resolved(s, n);
  const auto& x = s.nodes;
  const auto f = s.eigenfunctions.col(n - 1);
  const double alpha = s.eigenvalues(n - 1);
  const Eigen::Index m = x.size();
  if (m < 3) return 0.0;
  // Flux (f'/p) at midpoints, then its central difference at the nodes.
  Eigen::VectorXd flux(m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const double p = s.source.pdf(0.5 * (x(i) + x(i + 1)));
    flux(i) = (f(i + 1) - f(i)) / (x(i + 1) - x(i)) / p;
  }
  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    const double second = (flux(i) - flux(i - 1)) / (0.5 * (x(i + 1) - x(i - 1)));
    worst = std::max(worst, std::abs(alpha * second + f(i)));
  }
  return worst;
}

double variance_series(const SpectralDecomposition& s, const TestFunction& u,
                       Eigen::Index n_terms) {
  n_terms = std::clamp<Eigen::Index>(n_terms, 0, s.size());
  Eigen::VectorXd weighted(s.nodes.size());
  for (Eigen::Index i = 0; i < weighted.size(); ++i)
    weighted(i) = s.weights(i) * u.derivative(s.nodes(i));
  const Eigen::VectorXd coeff = s.eigenfunctions.leftCols(n_terms).transpose() * weighted;
  double total = 0.0;
  // Eigenvalues below zero are rounding noise of a PSD operator.
  for (Eigen::Index n = 0; n < n_terms; ++n)
    total += std::max(s.eigenvalues(n), 0.0) * coeff(n) * coeff(n);
  return total;
}

}  // namespace hoeffding
