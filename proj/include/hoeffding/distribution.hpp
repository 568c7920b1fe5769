#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hoeffding {

/// Seedable 64-bit generator used for every stochastic computation.
using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0,1), built from the top 53 bits so the
/// stream is identical on every standard library.
double uniform_open(Rng& rng);

/// Tail mass cut from each side of an unbounded support before quadrature.
inline constexpr double kTailEpsilon = 1e-10;

struct Support {
  double lo;  // may be -inf
  double hi;  // may be +inf
};

struct Atom {
  double x;
  double weight;
};

struct Moments {
  double mean;
  double variance;
  double mean_abs_dev;  // E|X - mean|
};

namespace family {
struct Uniform {
  double a, b;
};
/// Two-point law p*delta_a + (1-p)*delta_b, a < b.
struct Bernoulli {
  double p, a, b;
};
struct Gaussian {
  double mu, sigma;
};
struct Exponential {
  double rate;
};
struct Beta {
  double alpha, beta;
};
/// Sorted distinct atoms with cumulative weights; ties in the source sample merge.
struct Empirical {
  std::vector<Atom> atoms;
  std::vector<double> cumulative;
  std::size_t count;
};
}  // namespace family

/// A one-dimensional probability law. Immutable value type; all queries are
/// pure and safe to call concurrently.
class Distribution {
 public:
  using Law = std::variant<family::Uniform, family::Bernoulli, family::Gaussian,
                           family::Exponential, family::Beta, family::Empirical>;

  static Distribution uniform(double a = 0.0, double b = 1.0);
  static Distribution bernoulli(double p, double a = 0.0, double b = 1.0);
  static Distribution gaussian(double mu = 0.0, double sigma = 1.0);
  static Distribution exponential(double rate = 1.0);
  static Distribution beta(double alpha, double beta);
  static Distribution empirical(std::vector<double> sample);
  static Distribution point_mass(double a);

  const Law& law() const { return law_; }
  std::string_view family_name() const;
  /// Round-trippable DSL string, e.g. "beta:alpha=0.5,beta=0.5".
  std::string describe() const;

  /// Support endpoints (a0, a1); infinite for unbounded laws.
  Support support() const;
  /// Finite integration domain: the support with unbounded ends cut at the
  /// eps and 1-eps quantiles.
  Support truncated_support(double eps = kTailEpsilon) const;

  double cdf(double x) const;
  /// F(x-), the left limit.
  double cdf_left(double x) const;
  /// 1 - F(x), computed without cancellation where the family allows.
  double survival(double x) const;
  /// Generalized inverse inf{x : F(x) >= u}.
  double quantile(double u) const;

  bool has_density() const;
  bool is_atomic() const { return !has_density(); }
  /// Throws NoDensity for atomic laws.
  double pdf(double x) const;
  /// True when the density is unbounded at the lower / upper support endpoint.
  bool density_singular_lo() const;
  bool density_singular_hi() const;

  std::span<const Atom> atoms() const;

  Moments moments() const;
  double mean() const;
  double variance() const;

  /// E[(X - a) 1{X > x}] with a = E X.
  double upper_centered_moment(double x) const;

  std::complex<double> characteristic_function(double t) const;

  double sample(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t n) const;

 private:
  explicit Distribution(Law law) : law_(std::move(law)) {}
  Law law_;
  std::vector<Atom> bernoulli_atoms_;
};

/// Parses the CLI distribution DSL ("uniform:a=0,b=1", "empirical:path=x.csv", ...).
Distribution parse_distribution(std::string_view spec);

/// One-column numeric CSV, optional header line.
Distribution load_empirical(const std::filesystem::path& path);

}  // namespace hoeffding
