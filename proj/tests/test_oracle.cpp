#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hoeffding/error.hpp"
#include "hoeffding/kernel.hpp"
#include "hoeffding/oracle.hpp"

using namespace hoeffding;

namespace {

std::vector<Distribution> shipped() {
  return {Distribution::uniform(),       Distribution::gaussian(),
          Distribution::exponential(1.0), Distribution::beta(0.5, 0.5),
          Distribution::bernoulli(0.3)};
}

template <class Cov>
Eigen::MatrixXd covariance_matrix(const std::vector<TestFunction>& lib, Cov&& cov) {
  const auto n = static_cast<Eigen::Index>(lib.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) c(i, j) = c(j, i) = cov(lib[i], lib[j]);
  return c;
}

void expect_cauchy_schwarz(const Eigen::MatrixXd& c, double rel) {
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      EXPECT_LE(c(i, j) * c(i, j), c(i, i) * c(j, j) * (1.0 + rel) + 1e-300) << i << "," << j;
}

}  // namespace

TEST(DirectCovariance, Examples) {
  const auto u = Distribution::uniform();
  const TestFunction x = testfn::monomial(1);
  EXPECT_NEAR(direct_covariance(u, x, x), 1.0 / 12.0, 1e-15);
  for (const auto& d : shipped())
    EXPECT_NEAR(direct_covariance(d, testfn::constant(4.0), x), 0.0, 1e-14) << d.describe();
  EXPECT_NEAR(direct_covariance(u, testfn::sine(1), testfn::sine(1)), 0.5, 1e-15);
}

TEST(DirectCovariance, FrozenValues) {
  // Independent mpmath quadrature. cos^2 puts weight near x = 1, where the
  // arcsine mass within a few ulps is not resolvable.
  const auto arcsine = Distribution::beta(0.5, 0.5);
  EXPECT_NEAR(direct_covariance(arcsine, testfn::sine(1), testfn::sine(1)), 0.389861545730032769, 2e-9);
  EXPECT_NEAR(direct_covariance(arcsine, testfn::cosine(1), testfn::cosine(1)), 0.517575151612346859, 2e-9);
  EXPECT_NEAR(direct_covariance(Distribution::beta(2.0, 3.0), testfn::monomial(2), testfn::monomial(1)),
              0.0342857142857142857, 1e-14);
  EXPECT_NEAR(direct_covariance(Distribution::bernoulli(0.3), testfn::monomial(1), testfn::monomial(1)),
              0.21, 1e-15);
}

TEST(DirectCovariance, CauchySchwarz) {
  for (const auto& d : shipped()) {
    const auto lib = test_library_for(d);
    const Eigen::MatrixXd c = covariance_matrix(lib, [&](const TestFunction& u, const TestFunction& v) {
      return direct_covariance(d, u, v);
    });
    expect_cauchy_schwarz(c, 1e-10);
  }
}

TEST(McCovariance, Examples) {
  const auto d = Distribution::uniform();
  const TestFunction x = testfn::monomial(1);
  const McEstimate e = mc_covariance(d, x, x, 1000000, 12345);
  EXPECT_NEAR(e.estimate, 1.0 / 12.0, 3.0 * e.standard_error);
  EXPECT_EQ(e.seed, 12345u);

  const McEstimate c = mc_covariance(d, testfn::constant(1.0), x, 1000, 1);
  EXPECT_EQ(c.estimate, 0.0);
  EXPECT_EQ(c.standard_error, 0.0);

  const McEstimate again = mc_covariance(d, x, x, 1000000, 12345);
  EXPECT_EQ(again.estimate, e.estimate);
  EXPECT_EQ(again.standard_error, e.standard_error);
}

TEST(McCovariance, JackknifeMatchesBruteForce) {
  const std::vector<double> sample{0.1, 0.5, 0.2, 0.9, 0.4, 0.35};
  const TestFunction u = testfn::monomial(1), v = testfn::monomial(2);
  const auto plug_in = [&](const std::vector<double>& xs) {
    double mu = 0.0, mv = 0.0, muv = 0.0;
    for (double x : xs) {
      mu += u(x);
      mv += v(x);
      muv += u(x) * v(x);
    }
    const double n = xs.size();
    return muv / n - (mu / n) * (mv / n);
  };
  std::vector<double> loo;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::vector<double> rest = sample;
    rest.erase(rest.begin() + static_cast<long>(i));
    loo.push_back(plug_in(rest));
  }
  double mean = 0.0;
  for (double t : loo) mean += t;
  mean /= loo.size();
  double ss = 0.0;
  for (double t : loo) ss += (t - mean) * (t - mean);
  const double n = sample.size();
  const double se = std::sqrt((n - 1.0) / n * ss);

  const McEstimate e = mc_covariance(sample, u, v);
  EXPECT_NEAR(e.estimate, plug_in(sample), 1e-15);
  EXPECT_NEAR(e.standard_error, se, 1e-14);
}

TEST(McCovariance, StreamsDiffer) {
  Rng a = make_stream(1, 0), b = make_stream(1, 1);
  EXPECT_NE(a(), b());
}

TEST(HoeffdingCovariance, Examples) {
  const auto u = Distribution::uniform();
  EXPECT_NEAR(hoeffding_covariance(u, testfn::monomial(1), testfn::monomial(1)), 1.0 / 12.0, 1e-14);
  EXPECT_NEAR(hoeffding_covariance(Distribution::gaussian(), testfn::monomial(1), testfn::monomial(1)), 1.0,
              1e-7);
  EXPECT_NEAR(hoeffding_covariance(u, testfn::monomial(2), testfn::monomial(1)), 1.0 / 12.0, 1e-14);
}

TEST(HoeffdingCovariance, MatchesDirectAcrossLibrary) {
  // The shipped continuous families are covered by the acceptance suite.
  for (const auto& d : {Distribution::uniform(), Distribution::bernoulli(0.3),
                        Distribution::empirical({0.1, 0.4, 0.4, 0.7, 2.0})}) {
    const auto lib = test_library_for(d);
    for (std::size_t i = 0; i < lib.size(); ++i)
      for (std::size_t j = i; j < lib.size(); ++j)
        EXPECT_NEAR(hoeffding_covariance(d, lib[i], lib[j]), direct_covariance(d, lib[i], lib[j]), 1e-7)
            << d.describe() << " " << lib[i].name << " " << lib[j].name;
  }
}

TEST(HoeffdingCovariance, KernelFormCauchySchwarz) {
  const auto d = Distribution::beta(0.5, 0.5);
  const Eigen::MatrixXd c = covariance_matrix(test_library(false), [&](const TestFunction& u, const TestFunction& v) {
    return hoeffding_covariance(d, u, v);
  });
  expect_cauchy_schwarz(c, 1e-8);
}

TEST(Integrability, DivergentDoubleIntegral) {
  // u = x^{-1/2}: int int |u'(x)||u'(y)| H diverges logarithmically at 0.
  const TestFunction u{"x^-1/2", [](double x) { return 1.0 / std::sqrt(x); },
                       [](double x) { return -0.5 / (x * std::sqrt(x)); }, false, std::nullopt};
  try {
    integrability_check(Distribution::uniform(), u);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IntegrabilityViolation);
  }
}

TEST(Integrability, ConvergentLibrary) {
  for (const auto& d : shipped())
    for (const auto& u : test_library_for(d)) EXPECT_NO_THROW(integrability_check(d, u)) << d.describe() << u.name;
}

TEST(TestLibrary, Contract) {
  const auto periodic = test_library(true);
  EXPECT_EQ(periodic.size(), 10u);
  for (const auto& u : periodic) {
    EXPECT_NEAR(u(0.0), u(1.0), 1e-12) << u.name;
    EXPECT_TRUE(is_periodic(u));
  }
  const auto all = test_library(false);
  bool has_x = false;
  for (const auto& u : all) {
    if (u.name == "x") {
      has_x = true;
      for (double x : {-3.0, 0.0, 0.4, 7.0}) EXPECT_EQ(u.derivative(x), 1.0);
    }
    if (u.name.rfind("bump", 0) == 0) {
      ASSERT_TRUE(u.derivative_support.has_value());
      EXPECT_EQ(u.derivative_support->lo, 0.25);
      EXPECT_EQ(u.derivative_support->hi, 0.75);
      EXPECT_EQ(u.derivative(0.2), 0.0);
      EXPECT_EQ(u.derivative(0.8), 0.0);
      EXPECT_GT(u.derivative(0.5), 0.0);
      EXPECT_NEAR(u(0.75) - u(0.25), 1.0, 1e-12);
    }
  }
  EXPECT_TRUE(has_x);
  EXPECT_FALSE(is_periodic(testfn::monomial(1)));
  EXPECT_THROW(require_periodic(testfn::monomial(2)), Error);
}

TEST(TestLibrary, DerivativesMatchFiniteDifferences) {
  std::vector<TestFunction> fns = test_library(false);
  for (const auto& u : test_library_for(Distribution::gaussian())) fns.push_back(u);
  for (const auto& u : fns) {
    for (int i = 0; i < 100; ++i) {
      const double x = -5.0 + 11.0 * (i + 0.5) / 100.0;
      const double h = 1e-5;
      const double fd = (u(x + h) - u(x - h)) / (2.0 * h);
      EXPECT_NEAR(fd, u.derivative(x), 1e-6 * std::max(1.0, std::abs(u.derivative(x)))) << u.name << " x=" << x;
    }
  }
}

TEST(TestLibrary, WindowedForUnboundedLaws) {
  for (const auto& u : test_library_for(Distribution::gaussian())) {
    if (u.periodic) continue;
    ASSERT_TRUE(u.derivative_support.has_value()) << u.name;
    EXPECT_EQ(u.derivative(u.derivative_support->hi + 0.1), 0.0);
  }
}
