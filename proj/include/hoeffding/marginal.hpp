#pragma once

#include "hoeffding/distribution.hpp"
#include "hoeffding/oracle.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

/// Densities below this are treated as zero when forming the Stein kernel.
inline constexpr double kDensityFloor = 1e-300;

/// Density h of the marginal of the Höffding measure. Laws with a density use
/// h(x) = E[(X - a) 1{X > x}]; atomic laws use
/// h(x) = (1 - F(x)) E(x - X)^+ + F(x) E(X - x)^+, exact at every x.
double marginal_density(const Distribution& d, double x);

/// h(x) = (1 - F(x)) int_{-inf}^x F + F(x) int_x^inf (1 - F), by quadrature of F
/// for laws with a density (exact sums for atomic laws).
double marginal_density_cdf_form(const Distribution& d, double x,
                                 const QuadratureScheme& scheme = {});

/// tau(x) = h(x) / p(x).
double stein_kernel(const Distribution& d, double x);

/// |cov(X, u(X)) - E tau(X) u'(X)|, both sides by quadrature.
double stein_identity_residual(const Distribution& d, const TestFunction& u,
                               const QuadratureScheme& scheme = {});

/// 4 E|tau(X) - 1| + 4 |1 - a|, with a = E X, taken literally. The standard
/// Gaussian itself evaluates to 4 under this normalization.
double gaussian_tv_bound(const Distribution& d, const QuadratureScheme& scheme = {});

/// sup over a probe grid of |h(x) - Var(X) p(x)|; vanishes only for Gaussian laws.
double gaussian_characterization_residual(const Distribution& d, int probes = 401);

}  // namespace hoeffding
