#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "hoeffding/distribution.hpp"
#include "hoeffding/oracle.hpp"

namespace hoeffding {

/// Eigenpairs of T f(x) = int H(x,y) f(y) dy from a Gauss-Legendre Nyström
/// discretization. Eigenvalues are non-increasing; column n of `eigenfunctions`
/// holds f_{n+1} at the nodes, orthonormal in the weighted inner product.
struct SpectralDecomposition {
  Distribution source;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunctions;
  Eigen::VectorXd cdf_at_nodes;
  Eigen::VectorXd survival_at_nodes;

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Eigenvalues below this are treated as unresolved.
inline constexpr double kResolvedEigenvalue = 1e-12;

/// Symmetrized Nyström decomposition W^{1/2} K W^{1/2} on the truncated support.
/// Each eigenfunction is signed so its first clearly non-zero node value is positive.
SpectralDecomposition nystrom_decompose(const Distribution& d, int n_nodes);

struct TraceReport {
  double eigenvalue_sum;     // sum of all computed alpha_n
  double diagonal_integral;  // int F (1 - F) dx by independent quadrature
  double half_mean_abs_difference;  // (1/2) E|X - X'| by Monte Carlo
  double mc_standard_error;
  std::uint64_t seed;
};

TraceReport trace_report(const SpectralDecomposition& s, std::size_t mc_pairs = 200000,
                         std::uint64_t seed = 1);

/// |sum alpha_n - int F (1 - F) dx|.
double trace_residual(const SpectralDecomposition& s);

/// Nyström extension of f_1..f_{n_terms} to arbitrary points: row i holds
/// (1/alpha_n) sum_j w_j H(x_i, x_j) f_n(x_j).
Eigen::MatrixXd extend_eigenfunctions(const SpectralDecomposition& s, std::span<const double> xs,
                                      Eigen::Index n_terms);

/// sum_{n <= n_terms} alpha_n f_n(x) f_n(y).
double mercer_reconstruct(const SpectralDecomposition& s, Eigen::Index n_terms, double x, double y);

/// max over interior nodes of |alpha_n (f_n'/p)' + f_n| with central differences
/// on the node grid. `n` is 1-based.
double sturm_liouville_residual(const SpectralDecomposition& s, Eigen::Index n);

/// sum_{n <= n_terms} alpha_n (int u'(x) f_n(x) dx)^2, which tends to Var(u(X)).
double variance_series(const SpectralDecomposition& s, const TestFunction& u, Eigen::Index n_terms);

}  // namespace hoeffding
