#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hoeffding/error.hpp"
#include "hoeffding/kernel.hpp"

using namespace hoeffding;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Distribution> shipped() {
  return {Distribution::uniform(),       Distribution::bernoulli(0.3),
          Distribution::gaussian(),      Distribution::exponential(1.0),
          Distribution::beta(0.5, 0.5),  Distribution::beta(2.0, 3.0),
          Distribution::empirical({0.1, 0.4, 0.4, 0.7, 2.0})};
}

}  // namespace

TEST(KernelEval, Examples) {
  const KernelSurface u(Distribution::uniform());
  EXPECT_DOUBLE_EQ(kernel_eval(u, 0.25, 0.5), 0.125);
  for (const auto& d : shipped()) {
    const KernelSurface k(d);
    const double a1 = std::isfinite(d.support().hi) ? d.support().hi : 1e300;
    EXPECT_EQ(kernel_eval(k, 0.3, a1), 0.0) << d.describe();
  }
  const KernelSurface b(Distribution::bernoulli(0.3));
  for (double x : {0.01, 0.3, 0.99})
    for (double y : {0.2, 0.5, 0.75}) EXPECT_NEAR(kernel_eval(b, x, y), 0.21, 1e-15);
}

TEST(KernelEval, SymmetricBoundedVanishesOutside) {
  Rng rng(3);
  for (const auto& d : shipped()) {
    const KernelSurface k(d);
    const Support s = d.truncated_support();
    for (int i = 0; i < 500; ++i) {
      const double x = s.lo + (s.hi - s.lo) * uniform_open(rng);
      const double y = s.lo + (s.hi - s.lo) * uniform_open(rng);
      EXPECT_EQ(k(x, y), k(y, x));
      EXPECT_GE(k(x, y), 0.0);
      EXPECT_LE(k(x, y), 0.25);
    }
    if (std::isfinite(d.support().lo)) { EXPECT_EQ(k(d.support().lo - 1.0, 0.5), 0.0); }
  }
}

TEST(KernelEval, PointwiseCauchySchwarz) {
  for (const auto& d : shipped()) {
    const KernelSurface k(d);
    const Support s = d.truncated_support();
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) {
        const double x = s.lo + (s.hi - s.lo) * (i + 0.5) / 200.0;
        const double y = s.lo + (s.hi - s.lo) * (j + 0.5) / 200.0;
        const double h = k(x, y);
        ASSERT_LE(h * h, k(x, x) * k(y, y) * (1.0 + 1e-12) + 1e-300) << d.describe();
      }
    }
  }
}

TEST(TotalMass, Examples) {
  EXPECT_NEAR(total_mass(KernelSurface(Distribution::uniform())), 1.0 / 12.0, 1e-14);
  EXPECT_NEAR(total_mass(KernelSurface(Distribution::bernoulli(0.3))), 0.21, 1e-14);
  EXPECT_EQ(total_mass(KernelSurface(Distribution::point_mass(1.0))), 0.0);
}

TEST(TotalMass, EqualsVariance) {
  for (const auto& d : shipped())
    EXPECT_NEAR(total_mass(KernelSurface(d)) / d.variance(), 1.0, 1e-7) << d.describe();
}

TEST(Gram, Examples) {
  const KernelSurface k(Distribution::uniform());
  const std::vector<double> pts{1.0 / 3.0, 2.0 / 3.0};
  const Eigen::MatrixXd m = gram_matrix(k, pts);
  EXPECT_NEAR(m(0, 0), 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(m(0, 1), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(m(1, 0), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(m(1, 1), 2.0 / 9.0, 1e-15);

  const std::vector<double> edge{0.0};
  EXPECT_EQ(gram_matrix(k, edge)(0, 0), 0.0);
}

TEST(Gram, PositiveSemidefinite) {
  Rng rng(11);
  for (const auto& d : shipped()) {
    const KernelSurface k(d);
    const Support s = d.truncated_support();
    std::vector<double> pts(50);
    for (double& x : pts) x = s.lo + (s.hi - s.lo) * uniform_open(rng);
    pts[7] = pts[3];  // repeated points are allowed
    const Eigen::MatrixXd m = gram_matrix(k, pts);
    EXPECT_GE(min_eigenvalue(m), -psd_tolerance(m.rows())) << d.describe();
  }
}

TEST(Pseudometric, Examples) {
  const KernelSurface k(Distribution::uniform());
  EXPECT_EQ(pseudometric(k, 0.4, 0.4), 0.0);
  EXPECT_EQ(pseudometric(k, 0.0, 1.0), 0.0);
  EXPECT_NEAR(pseudometric(k, 1.0 / 3.0, 2.0 / 3.0), std::sqrt(2.0) / 3.0, 1e-15);
}

TEST(Pseudometric, TriangleInequality) {
  Rng rng(5);
  const KernelSurface k(Distribution::beta(2.0, 3.0));
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform_open(rng), y = uniform_open(rng), z = uniform_open(rng);
    EXPECT_LE(pseudometric(k, x, z), pseudometric(k, x, y) + pseudometric(k, y, z) + 1e-12);
    EXPECT_EQ(pseudometric(k, x, y), pseudometric(k, y, x));
  }
}

TEST(RectangleMeasure, CauchySchwarz) {
  Rng rng(17);
  for (const auto& d : {Distribution::uniform(), Distribution::bernoulli(0.3),
                        Distribution::beta(0.5, 0.5)}) {
    const KernelSurface k(d);
    for (int i = 0; i < 100; ++i) {
      double a0 = uniform_open(rng), a1 = uniform_open(rng);
      double b0 = uniform_open(rng), b1 = uniform_open(rng);
      if (a0 > a1) std::swap(a0, a1);
      if (b0 > b1) std::swap(b0, b1);
      const double ab = rectangle_measure(k, a0, a1, b0, b1);
      const double aa = rectangle_measure(k, a0, a1, a0, a1);
      const double bb = rectangle_measure(k, b0, b1, b0, b1);
      EXPECT_LE(ab * ab, aa * bb * (1.0 + 1e-8) + 1e-300) << d.describe();
    }
  }
}

TEST(RectangleMeasure, UniformClosedForm) {
  // lambda([0,a] x [0,1]) = int_0^a x(1-x)/2 dx for the uniform law.
  const KernelSurface k(Distribution::uniform());
  const double a = 0.37;
  EXPECT_NEAR(rectangle_measure(k, 0.0, a, 0.0, 1.0), a * a / 4.0 - a * a * a / 6.0, 1e-15);
}

TEST(Fourier, Examples) {
  const KernelSurface u(Distribution::uniform());
  const auto v = fourier_lambda_hat(u, 2.0 * kPi, -2.0 * kPi);
  EXPECT_NEAR(v.real(), 1.0 / (4.0 * kPi * kPi), 1e-15);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);

  const KernelSurface g(Distribution::gaussian());
  EXPECT_NEAR(fourier_lambda_hat(g, 1.5, 1.5).imag(), 0.0, 1e-15);
  EXPECT_NEAR(fourier_lambda_hat(g, 0.0, 0.0).real(), 1.0, 1e-9);
  EXPECT_NEAR(fourier_lambda_hat(u, 0.0, 0.0).real(), 1.0 / 12.0, 1e-14);
}

TEST(Fourier, FrozenValues) {
  // Independent mpmath evaluations.
  const KernelSurface g(Distribution::gaussian());
  EXPECT_NEAR(fourier_lambda_hat(g, 1.0, 2.0).real(), 0.0354880010428282443, 1e-15);
  const KernelSurface u(Distribution::uniform());
  const auto a = fourier_lambda_hat(u, 0.5, 1.0);
  EXPECT_NEAR(a.real(), 0.0585973488911655191, 1e-14);
  EXPECT_NEAR(a.imag(), 0.0545890827891175174, 1e-14);
  const auto b = fourier_lambda_hat(u, 0.0, 1.0);
  EXPECT_NEAR(b.real(), 0.0713198318738266480, 1e-12);
  EXPECT_NEAR(b.imag(), 0.0389622017279120293, 1e-12);
}

TEST(Fourier, ClosedFormMatchesQuadrature) {
  for (const auto& d : shipped()) {
    const KernelSurface k(d);
    for (double t : {-4.0, -1.0, 0.5, 2.0}) {
      for (double s : {-2.0, 0.5, 4.0}) {
        EXPECT_LE(std::abs(fourier_lambda_hat(k, t, s) - fourier_lambda_hat_quadrature(k, t, s)),
                  kFourierTolerance)
            << d.describe() << " t=" << t << " s=" << s;
      }
    }
  }
}

TEST(Fourier, FrequencyLimit) {
  const KernelSurface k(Distribution::uniform());
  EXPECT_THROW(fourier_lambda_hat_quadrature(k, 60.0, 1.0), Error);
}

TEST(HoeffdingQuadrature, IndicatorProductsMatchRectangles) {
  const auto d = Distribution::beta(0.5, 0.5);
  QuadratureScheme s;
  s.knots = {0.2, 0.6, 0.3, 0.9};
  const HoeffdingQuadrature q(d, s);
  const double v = q.integrate([](double x) { return x >= 0.2 && x < 0.6 ? 1.0 : 0.0; },
                               [](double y) { return y >= 0.3 && y < 0.9 ? 1.0 : 0.0; });
  EXPECT_NEAR(v, rectangle_measure(KernelSurface(d), 0.2, 0.6, 0.3, 0.9), 1e-12);
}
