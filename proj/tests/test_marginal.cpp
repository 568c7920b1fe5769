#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hoeffding/error.hpp"
#include "hoeffding/marginal.hpp"

using namespace hoeffding;

namespace {

std::vector<Distribution> with_density() {
  return {Distribution::uniform(),       Distribution::uniform(-1.0, 3.0),
          Distribution::gaussian(),      Distribution::gaussian(1.0, 2.0),
          Distribution::exponential(1.0), Distribution::exponential(2.5),
          Distribution::beta(0.5, 0.5),  Distribution::beta(2.0, 3.0),
          Distribution::beta(0.7, 1.8)};
}

double integrate_h(const Distribution& d) {
  return rule_for(d).integrate([&](double x) { return marginal_density(d, x); });
}

}  // namespace

TEST(MarginalDensity, Examples) {
  EXPECT_NEAR(marginal_density(Distribution::uniform(), 0.5), 0.125, 1e-15);
  EXPECT_NEAR(marginal_density(Distribution::exponential(1.0), 2.0), 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(marginal_density(Distribution::gaussian(), 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi),
              1e-15);
}

TEST(MarginalDensity, UniformClosedForm) {
  const auto d = Distribution::uniform();
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    EXPECT_NEAR(marginal_density(d, x), x * (1.0 - x) / 2.0, 1e-15);
    EXPECT_NEAR(marginal_density_cdf_form(d, x), x * (1.0 - x) / 2.0, 1e-12);
  }
}

TEST(MarginalDensity, ZeroOutsideSupport) {
  EXPECT_EQ(marginal_density(Distribution::uniform(), -0.5), 0.0);
  EXPECT_EQ(marginal_density(Distribution::uniform(), 1.5), 0.0);
  EXPECT_EQ(marginal_density(Distribution::exponential(1.0), -1.0), 0.0);
  EXPECT_EQ(marginal_density(Distribution::bernoulli(0.3), 1.5), 0.0);
}

TEST(MarginalDensity, BernoulliIsConstantOnTheGap) {
  const auto d = Distribution::bernoulli(0.3);
  for (double x : {0.0, 0.2, 0.5, 0.99}) EXPECT_NEAR(marginal_density(d, x), 0.21, 1e-15);
}

TEST(MarginalDensity, TwoFormsAgree) {
  for (const auto& d : with_density()) {
    const Support s = d.truncated_support();
    for (int i = 0; i < 200; ++i) {
      const double x = s.lo + (s.hi - s.lo) * (i + 0.5) / 200.0;
      EXPECT_NEAR(marginal_density(d, x), marginal_density_cdf_form(d, x), 1e-9)
          << d.describe() << " x=" << x;
    }
  }
}

TEST(MarginalDensity, MassIsVariance) {
  for (const auto& d : with_density())
    EXPECT_NEAR(integrate_h(d) / d.variance(), 1.0, 1e-7) << d.describe();
  for (const auto& d : {Distribution::bernoulli(0.3), Distribution::empirical({0.0, 0.5, 2.0, 2.0})})
    EXPECT_NEAR(integrate_h(d) / d.variance(), 1.0, 1e-12) << d.describe();
}

TEST(MarginalDensity, ModeValueIsHalfMeanAbsDeviation) {
  for (const auto& d : {Distribution::uniform(), Distribution::exponential(1.0),
                        Distribution::gaussian(), Distribution::beta(2.0, 3.0)}) {
    const double a = d.mean();
    const double half_mad = 0.5 * d.moments().mean_abs_dev;
    EXPECT_NEAR(marginal_density(d, a - 1e-6), half_mad, 1e-8) << d.describe();
    EXPECT_NEAR(marginal_density(d, a + 1e-6), half_mad, 1e-8) << d.describe();
  }
}

TEST(MarginalDensity, Unimodal) {
  for (const auto& d : with_density()) {
    const Support s = d.truncated_support();
    const double a = d.mean();
    double prev = marginal_density(d, s.lo);
    for (int i = 1; i <= 500; ++i) {
      const double x = s.lo + (s.hi - s.lo) * i / 500.0;
      const double h = marginal_density(d, x);
      EXPECT_GE(h, 0.0);
      if (x <= a) {
        EXPECT_GE(h, prev - 1e-10) << d.describe() << " x=" << x;
      } else if (x - (s.hi - s.lo) / 500.0 >= a) {
        EXPECT_LE(h, prev + 1e-10) << d.describe() << " x=" << x;
      }
      prev = h;
    }
  }
}

TEST(SteinKernel, Examples) {
  const auto g = Distribution::gaussian();
  for (double x : {-5.0, -1.3, 0.0, 2.7, 5.0}) EXPECT_NEAR(stein_kernel(g, x), 1.0, 1e-12);
  EXPECT_NEAR(stein_kernel(Distribution::uniform(), 0.5), 0.125, 1e-15);
  EXPECT_NEAR(stein_kernel(Distribution::exponential(1.0), 2.0), 2.0, 1e-14);
}

TEST(SteinKernel, Errors) {
  EXPECT_THROW(stein_kernel(Distribution::uniform(), 2.0), Error);
  try {
    stein_kernel(Distribution::uniform(), 2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroDensity);
  }
  try {
    stein_kernel(Distribution::bernoulli(0.3), 0.5);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoDensity);
  }
}

TEST(SteinIdentity, Examples) {
  const auto g = Distribution::gaussian();
  EXPECT_LE(stein_identity_residual(g, testfn::monomial(2)), 1e-9);
  EXPECT_LE(stein_identity_residual(Distribution::uniform(), testfn::monomial(1)), 1e-12);
  // The unwindowed cube loses E X^4 beyond the 1e-10 quantiles to truncation.
  EXPECT_LE(stein_identity_residual(g, testfn::monomial(3)), 1e-6);
}

TEST(SteinIdentity, Library) {
  for (const auto& d : with_density()) {
    for (const TestFunction& u : test_library_for(d))
      EXPECT_LE(stein_identity_residual(d, u), 1e-7) << d.describe() << " " << u.name;
  }
}

TEST(TvBound, Examples) {
  EXPECT_NEAR(gaussian_tv_bound(Distribution::gaussian()), 4.0, 1e-8);
  EXPECT_NEAR(gaussian_tv_bound(Distribution::gaussian(1.0, 1.0)), 0.0, 1e-8);
  EXPECT_NEAR(gaussian_tv_bound(Distribution::uniform()), 11.0 / 3.0 + 2.0, 1e-12);
}

TEST(TvBound, ScaledGaussian) {
  // tau = sigma^2 = 4 everywhere, mean 1.
  EXPECT_NEAR(gaussian_tv_bound(Distribution::gaussian(1.0, 2.0)), 12.0, 1e-8);
}

TEST(Characterization, Examples) {
  EXPECT_LE(gaussian_characterization_residual(Distribution::gaussian(0.0, 2.0)), 1e-8);
  EXPECT_NEAR(gaussian_characterization_residual(Distribution::uniform()), 1.0 / 12.0, 1e-15);
  EXPECT_GE(gaussian_characterization_residual(Distribution::exponential(1.0)), 0.1);
  EXPECT_NEAR(gaussian_characterization_residual(Distribution::exponential(1.0)), 1.0, 1e-15);
}

TEST(Characterization, NoDensity) {
  EXPECT_THROW(gaussian_characterization_residual(Distribution::bernoulli(0.5)), Error);
}
