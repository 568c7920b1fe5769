#include "hoeffding/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hoeffding/error.hpp"
#include "hoeffding/quadrature.hpp"

namespace hoeffding {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, msg);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Largest atom index with x_k <= x, or -1.
std::ptrdiff_t atom_index_le(const std::vector<Atom>& atoms, double x) {
  auto it = std::upper_bound(atoms.begin(), atoms.end(), x,
                             [](double v, const Atom& a) { return v < a.x; });
  return static_cast<std::ptrdiff_t>(it - atoms.begin()) - 1;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Distribution Distribution::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform requires finite a < b");
  return Distribution(family::Uniform{a, b});
}

Distribution Distribution::bernoulli(double p, double a, double b) {
  require(p > 0.0 && p < 1.0, "bernoulli requires 0 < p < 1");
  require(std::isfinite(a) && std::isfinite(b) && a < b, "bernoulli requires finite a < b");
  Distribution d(family::Bernoulli{p, a, b});
  d.bernoulli_atoms_ = {{a, p}, {b, 1.0 - p}};
  return d;
}

Distribution Distribution::gaussian(double mu, double sigma) {
  require(std::isfinite(mu) && sigma > 0.0 && std::isfinite(sigma),
          "gaussian requires finite mu and sigma > 0");
  return Distribution(family::Gaussian{mu, sigma});
}

Distribution Distribution::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential requires rate > 0");
  return Distribution(family::Exponential{rate});
}

Distribution Distribution::beta(double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
          "beta requires alpha, beta > 0");
  return Distribution(family::Beta{alpha, beta});
}

Distribution Distribution::empirical(std::vector<double> sample) {
  if (sample.empty()) throw Error(ErrorKind::EmptySample, "empirical sample has no values");
  for (double v : sample)
    if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "non-finite sample value");
  std::sort(sample.begin(), sample.end());
  family::Empirical e;
  e.count = sample.size();
  const double unit = 1.0 / static_cast<double>(sample.size());
  for (std::size_t i = 0; i < sample.size();) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    e.atoms.push_back({sample[i], static_cast<double>(j - i) * unit});
    e.cumulative.push_back(static_cast<double>(j) * unit);
    i = j;
  }
  e.cumulative.back() = 1.0;
  return Distribution(std::move(e));
}

Distribution Distribution::point_mass(double a) { return empirical({a}); }

std::string_view Distribution::family_name() const {
  return std::visit(Overloaded{
                        [](const family::Uniform&) { return std::string_view("uniform"); },
                        [](const family::Bernoulli&) { return std::string_view("bernoulli"); },
                        [](const family::Gaussian&) { return std::string_view("gaussian"); },
                        [](const family::Exponential&) { return std::string_view("exponential"); },
                        [](const family::Beta&) { return std::string_view("beta"); },
                        [](const family::Empirical&) { return std::string_view("empirical"); },
                    },
                    law_);
}

std::string Distribution::describe() const {
  const auto n = format_number;
  return std::visit(
      Overloaded{
          [&](const family::Uniform& u) { return "uniform:a=" + n(u.a) + ",b=" + n(u.b); },
          [&](const family::Bernoulli& b) {
            return "bernoulli:p=" + n(b.p) + ",a=" + n(b.a) + ",b=" + n(b.b);
          },
          [&](const family::Gaussian& g) {
            return "gaussian:mu=" + n(g.mu) + ",sigma=" + n(g.sigma);
          },
          [&](const family::Exponential& e) { return "exponential:rate=" + n(e.rate); },
          [&](const family::Beta& b) {
            return "beta:alpha=" + n(b.alpha) + ",beta=" + n(b.beta);
          },
          [&](const family::Empirical& e) {
            return "empirical:n=" + std::to_string(e.count) + ",atoms=" +
                   std::to_string(e.atoms.size());
          },
      },
      law_);
}

Support Distribution::support() const {
  return std::visit(Overloaded{
                        [](const family::Uniform& u) { return Support{u.a, u.b}; },
                        [](const family::Bernoulli& b) { return Support{b.a, b.b}; },
                        [](const family::Gaussian&) { return Support{-kInf, kInf}; },
                        [](const family::Exponential&) { return Support{0.0, kInf}; },
                        [](const family::Beta&) { return Support{0.0, 1.0}; },
                        [](const family::Empirical& e) {
                          return Support{e.atoms.front().x, e.atoms.back().x};
                        },
                    },
                    law_);
}

Support Distribution::truncated_support(double eps) const {
  Support s = support();
  if (!std::isfinite(s.lo)) s.lo = quantile(eps);
  if (!std::isfinite(s.hi)) {
    if (const auto* g = std::get_if<family::Gaussian>(&law_)) {
      s.hi = 2.0 * g->mu - quantile(eps);
    } else if (const auto* e = std::get_if<family::Exponential>(&law_)) {
      s.hi = -std::log(eps) / e->rate;
    } else {
      s.hi = quantile(1.0 - eps);
    }
  }
  return s;
}

double Distribution::cdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const family::Uniform& u) {
            return x <= u.a ? 0.0 : x >= u.b ? 1.0 : (x - u.a) / (u.b - u.a);
          },
          [x](const family::Bernoulli& b) { return x < b.a ? 0.0 : x < b.b ? b.p : 1.0; },
          [x](const family::Gaussian& g) {
            return 0.5 * std::erfc(-(x - g.mu) / (g.sigma * std::numbers::sqrt2));
          },
          [x](const family::Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [x](const family::Beta& b) {
            return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : boost::math::ibeta(b.alpha, b.beta, x);
          },
          [x](const family::Empirical& e) {
            const auto k = atom_index_le(e.atoms, x);
            return k < 0 ? 0.0 : e.cumulative[static_cast<std::size_t>(k)];
          },
      },
      law_);
}

double Distribution::cdf_left(double x) const {
  if (const auto* b = std::get_if<family::Bernoulli>(&law_))
    return x <= b->a ? 0.0 : x <= b->b ? b->p : 1.0;
  if (const auto* e = std::get_if<family::Empirical>(&law_)) {
    auto it = std::lower_bound(e->atoms.begin(), e->atoms.end(), x,
                               [](const Atom& a, double v) { return a.x < v; });
    const auto k = static_cast<std::ptrdiff_t>(it - e->atoms.begin()) - 1;
    return k < 0 ? 0.0 : e->cumulative[static_cast<std::size_t>(k)];
  }
  return cdf(x);
}

double Distribution::survival(double x) const {
  return std::visit(
      Overloaded{
          [x](const family::Gaussian& g) {
            return 0.5 * std::erfc((x - g.mu) / (g.sigma * std::numbers::sqrt2));
          },
          [x](const family::Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
          [x](const family::Beta& b) {
            return x <= 0.0 ? 1.0 : x >= 1.0 ? 0.0 : boost::math::ibetac(b.alpha, b.beta, x);
          },
          [this, x](const auto&) { return 1.0 - cdf(x); },
      },
      law_);
}

double Distribution::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile level must lie in [0,1]");
  return std::visit(
      Overloaded{
          [u](const family::Uniform& d) { return d.a + (d.b - d.a) * u; },
          [u](const family::Bernoulli& d) { return u <= d.p ? d.a : d.b; },
          [u](const family::Gaussian& d) {
            if (u == 0.0) return -kInf;
            if (u == 1.0) return kInf;
            return boost::math::quantile(boost::math::normal(d.mu, d.sigma), u);
          },
          [u](const family::Exponential& d) {
            return u == 1.0 ? kInf : -std::log1p(-u) / d.rate;
          },
          [u](const family::Beta& d) {
            if (u == 0.0) return 0.0;
            if (u == 1.0) return 1.0;
            return boost::math::ibeta_inv(d.alpha, d.beta, u);
          },
          [u](const family::Empirical& d) {
            auto it = std::lower_bound(d.cumulative.begin(), d.cumulative.end(), u);
            if (it == d.cumulative.end()) --it;
            return d.atoms[static_cast<std::size_t>(it - d.cumulative.begin())].x;
          },
      },
      law_);
}

bool Distribution::has_density() const {
  return !std::holds_alternative<family::Bernoulli>(law_) &&
         !std::holds_alternative<family::Empirical>(law_);
}

double Distribution::pdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const family::Uniform& u) {
            return (x < u.a || x > u.b) ? 0.0 : 1.0 / (u.b - u.a);
          },
          [x](const family::Gaussian& g) { return normal_pdf((x - g.mu) / g.sigma) / g.sigma; },
          [x](const family::Exponential& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
          [x](const family::Beta& b) {
            if (x < 0.0 || x > 1.0) return 0.0;
            if ((x == 0.0 && b.alpha < 1.0) || (x == 1.0 && b.beta < 1.0)) return kInf;
            return std::exp((b.alpha - 1.0) * std::log(x) + (b.beta - 1.0) * std::log1p(-x) -
                            log_beta(b.alpha, b.beta));
          },
          [](const auto&) -> double {
            throw Error(ErrorKind::NoDensity, "atomic distribution has no density");
          },
      },
      law_);
}

bool Distribution::density_singular_lo() const {
  const auto* b = std::get_if<family::Beta>(&law_);
  return b != nullptr && b->alpha < 1.0;
}

bool Distribution::density_singular_hi() const {
  const auto* b = std::get_if<family::Beta>(&law_);
  return b != nullptr && b->beta < 1.0;
}

std::span<const Atom> Distribution::atoms() const {
  if (const auto* e = std::get_if<family::Empirical>(&law_)) return e->atoms;
  return bernoulli_atoms_;
}

Moments Distribution::moments() const {
  return std::visit(
      Overloaded{
          [](const family::Uniform& u) {
            const double w = u.b - u.a;
            return Moments{0.5 * (u.a + u.b), w * w / 12.0, w / 4.0};
          },
          [](const family::Bernoulli& b) {
            const double q = 1.0 - b.p;
            const double w = b.b - b.a;
            return Moments{b.p * b.a + q * b.b, b.p * q * w * w, 2.0 * b.p * q * w};
          },
          [](const family::Gaussian& g) {
            return Moments{g.mu, g.sigma * g.sigma,
                           g.sigma * std::sqrt(2.0 / std::numbers::pi)};
          },
          [](const family::Exponential& e) {
            return Moments{1.0 / e.rate, 1.0 / (e.rate * e.rate),
                           2.0 / (e.rate * std::numbers::e)};
          },
          [this](const family::Beta& b) {
            const double s = b.alpha + b.beta;
            const double m = b.alpha / s;
            return Moments{m, b.alpha * b.beta / (s * s * (s + 1.0)),
                           2.0 * upper_centered_moment(m)};
          },
          [](const family::Empirical& e) {
            double m = 0.0;
            for (const Atom& a : e.atoms) m += a.weight * a.x;
            double v = 0.0, mad = 0.0;
            for (const Atom& a : e.atoms) {
              v += a.weight * (a.x - m) * (a.x - m);
              mad += a.weight * std::abs(a.x - m);
            }
            return Moments{m, v, mad};
          },
      },
      law_);
}

double Distribution::mean() const { return moments().mean; }
double Distribution::variance() const { return moments().variance; }

double Distribution::upper_centered_moment(double x) const {
  return std::visit(
      Overloaded{
          [x](const family::Uniform& u) {
            if (x <= u.a || x >= u.b) return 0.0;
            const double m = 0.5 * (u.a + u.b);
            return ((u.b - m) * (u.b - m) - (x - m) * (x - m)) / (2.0 * (u.b - u.a));
          },
          [x](const family::Gaussian& g) { return g.sigma * normal_pdf((x - g.mu) / g.sigma); },
          [x](const family::Exponential& e) { return x <= 0.0 ? 0.0 : x * std::exp(-e.rate * x); },
          [x](const family::Beta& b) {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return std::exp(b.alpha * std::log(x) + b.beta * std::log1p(-x) -
                            std::log(b.alpha + b.beta) - log_beta(b.alpha, b.beta));
          },
          [this, x](const auto&) {
            const double m = mean();
            double s = 0.0;
            for (const Atom& a : atoms())
              if (a.x > x) s += a.weight * (a.x - m);
            return std::max(s, 0.0);
          },
      },
      law_);
}

std::complex<double> Distribution::characteristic_function(double t) const {
  using namespace std::complex_literals;
  if (t == 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [t](const family::Uniform& u) -> std::complex<double> {
            // (e^{itb} - e^{ita}) / (it(b-a)) = e^{itm} sin(th)/(th), h = (b-a)/2.
            const double h = 0.5 * (u.b - u.a);
            const double m = 0.5 * (u.a + u.b);
            return std::exp(1i * (t * m)) * (std::sin(t * h) / (t * h));
          },
          [t](const family::Gaussian& g) -> std::complex<double> {
            return std::exp(1i * (t * g.mu) - 0.5 * g.sigma * g.sigma * t * t);
          },
          [t](const family::Exponential& e) -> std::complex<double> {
            return e.rate / (e.rate - 1i * t);
          },
          [this, t](const family::Beta&) -> std::complex<double> {
            return expectation(*this, [t](double x) { return std::exp(1i * (t * x)); });
          },
          [this, t](const auto&) -> std::complex<double> {
            std::complex<double> s = 0.0;
            for (const Atom& a : atoms()) s += a.weight * std::exp(1i * (t * a.x));
            return s;
          },
      },
      law_);
}

double Distribution::sample(Rng& rng) const { return quantile(uniform_open(rng)); }

std::vector<double> Distribution::sample(Rng& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (double& v : out) v = sample(rng);
  return out;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::DivergentMoment: return "DivergentMoment";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::NoDensity: return "NoDensity";
    case ErrorKind::ZeroDensity: return "ZeroDensity";
    case ErrorKind::AtomicDistribution: return "AtomicDistribution";
    case ErrorKind::IndexOutOfSpectrum: return "IndexOutOfSpectrum";
    case ErrorKind::UnsupportedSupport: return "UnsupportedSupport";
    case ErrorKind::AlphaTooSmall: return "AlphaTooSmall";
    case ErrorKind::DensityBelowAlpha: return "DensityBelowAlpha";
    case ErrorKind::NonPeriodicFunction: return "NonPeriodicFunction";
    case ErrorKind::IntegrabilityViolation: return "IntegrabilityViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hoeffding
