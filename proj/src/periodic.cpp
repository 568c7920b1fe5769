#include "hoeffding/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hoeffding/error.hpp"

namespace hoeffding {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit_support(const Distribution& d) {
  const Support s = d.support();
  if (!(s.lo >= 0.0) || d.cdf_left(1.0) < 1.0)
    throw Error(ErrorKind::UnsupportedSupport, d.describe() + " has mass outside [0,1)");
}

void require_source_density(const Distribution& d) {
  if (!d.has_density()) throw Error(ErrorKind::NoDensity, d.describe() + " has no density");
}

double against_unit(const std::function<double(double)>& f) {
  return build_rule(0.0, 1.0, QuadratureScheme{}).integrate(f);
}

// Per-node tables of the (i + 1/2)/n midpoint grid; psi = A + c B on the grid.
struct GridTables {
  std::vector<double> cdf, sf, p, h;
  double variance;

  GridTables(const Distribution& d, int n) : cdf(n), sf(n), p(n), h(n), variance(d.variance()) {
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      cdf[i] = d.cdf(x);
      sf[i] = d.survival(x);
      p[i] = d.pdf(x);
      h[i] = marginal_density(d, x);
    }
  }

  std::size_t size() const { return cdf.size(); }

  double minimum(double c) const {
    double worst = std::numeric_limits<double>::infinity();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double psi = cdf[i] * sf[j] + (variance - c) + c * (p[i] + p[j]) - (h[i] + h[j]);
        worst = std::min(worst, psi);
      }
    }
    return worst;
  }

  double min_slope() const {
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    (void)hi;
    return 2.0 * *lo - 1.0;
  }
};

constexpr double kNonnegativityFloor = -1e-9;

}  // namespace

SignedMeasure SignedMeasure::atoms(std::vector<Atom> atoms) {
  SignedMeasure m;
  m.terms_.emplace_back(Atoms{std::move(atoms)});
  return m;
}

SignedMeasure SignedMeasure::scaled(double weight, Distribution law) {
  SignedMeasure m;
  m.terms_.emplace_back(Scaled{weight, std::move(law)});
  return m;
}

SignedMeasure SignedMeasure::uniform(double weight) {
  return scaled(weight, Distribution::uniform(0.0, 1.0));
}

SignedMeasure SignedMeasure::density(std::string name, std::function<double(double)> density,
                                     Interval support) {
  SignedMeasure m;
  m.terms_.emplace_back(Density{std::move(name), std::move(density), support});
  return m;
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  SignedMeasure m = *this;
  m.terms_.insert(m.terms_.end(), other.terms_.begin(), other.terms_.end());
  return m;
}

SignedMeasure SignedMeasure::operator*(double factor) const {
  SignedMeasure m = *this;
  for (Term& t : m.terms_) {
    std::visit(Overloaded{
                   [&](Atoms& a) {
                     for (Atom& atom : a.atoms) atom.weight *= factor;
                   },
                   [&](Scaled& s) { s.weight *= factor; },
                   [&](Density& d) {
                     d.density = [g = d.density, factor](double x) { return factor * g(x); };
                     d.name = std::to_string(factor) + "*(" + d.name + ")";
                   },
               },
               t);
  }
  return m;
}

double SignedMeasure::integrate(const std::function<double(double)>& f) const {
  double total = 0.0;
  for (const Term& t : terms_) {
    total += std::visit(
        Overloaded{
            [&](const Atoms& a) {
              double s = 0.0;
              for (const Atom& atom : a.atoms) s += atom.weight * f(atom.x);
              return s;
            },
            [&](const Scaled& s) { return s.weight * expectation(s.law, f); },
            [&](const Density& d) {
              return build_rule(d.support.lo, d.support.hi, QuadratureScheme{})
                  .integrate([&](double x) { return d.density(x) * f(x); });
            },
        },
        t);
  }
  return total;
}

double SignedMeasure::total_mass() const {
  return integrate([](double) { return 1.0; });
}

std::string SignedMeasure::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) out << " + ";
    first = false;
    std::visit(Overloaded{
                   [&](const Atoms& a) {
                     out << "atoms[";
                     for (std::size_t i = 0; i < a.atoms.size(); ++i)
                       out << (i ? "," : "") << a.atoms[i].weight << "@" << a.atoms[i].x;
                     out << "]";
                   },
                   [&](const Scaled& s) { out << s.weight << "*" << s.law.describe(); },
                   [&](const Density& d) {
                     out << "density(" << d.name << ")[" << d.support.lo << "," << d.support.hi
                         << "]";
                   },
               },
               t);
  }
  return out.str();
}

SignedMeasure random_signed_measure(Rng& rng) {
  const auto uniform_in = [&](double lo, double hi) { return lo + (hi - lo) * uniform_open(rng); };
  const int n_terms = 1 + static_cast<int>(3.0 * uniform_open(rng));
  SignedMeasure m;
  for (int t = 0; t < n_terms; ++t) {
    switch (static_cast<int>(4.0 * uniform_open(rng))) {
      case 0: {
        std::vector<Atom> atoms(1 + static_cast<int>(3.0 * uniform_open(rng)));
        for (Atom& a : atoms) a = {uniform_open(rng) * 0.999, uniform_in(-5.0, 5.0)};
        m = m + SignedMeasure::atoms(std::move(atoms));
        break;
      }
      case 1:
        m = m + SignedMeasure::scaled(uniform_in(-5.0, 5.0),
                                      Distribution::beta(uniform_in(0.5, 3.0), uniform_in(0.5, 3.0)));
        break;
      case 2:
        m = m + SignedMeasure::uniform(uniform_in(-5.0, 5.0));
        break;
      default: {
        const double a0 = uniform_in(-3.0, 3.0), a1 = uniform_in(-3.0, 3.0),
                     a2 = uniform_in(-3.0, 3.0);
        std::ostringstream name;
        name << a0 << "+" << a1 << "x+" << a2 << "x^2";
        m = m + SignedMeasure::density(name.str(),
                                       [=](double x) { return a0 + a1 * x + a2 * x * x; });
        break;
      }
    }
  }
  return m;
}

MixingMeasure::MixingMeasure(Distribution source, double c, const QuadratureScheme& scheme)
    : source_(std::move(source)), c_(c), variance_(source_.variance()), scheme_(scheme) {}

MixingMeasure build_mixing(const Distribution& d, double c, const QuadratureScheme& scheme) {
  require_unit_support(d);
  if (!std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "c must be finite");
  return MixingMeasure(d, c, scheme);
}

MixingMeasure::Parts MixingMeasure::integrate_parts(const std::function<double(double)>& a,
                                                    const std::function<double(double)>& b,
                                                    const std::vector<double>& knots) const {
  QuadratureScheme local = scheme_;
  local.knots.insert(local.knots.end(), knots.begin(), knots.end());
  const auto [ma, ea, la] = linear_functionals(a, local);
  const auto [mb, eb, lb] = linear_functionals(b, local);
  return {HoeffdingQuadrature(source_, local).integrate(a, b), (variance_ - c_) * ma * mb,
          c_ * (ea * mb + ma * eb), -(la * mb + ma * lb)};
}

double MixingMeasure::marginal_mass(double lo, double hi) const {
  return integrate([=](double x) { return x >= lo && x < hi ? 1.0 : 0.0; },
                   [](double) { return 1.0; }, {lo, hi});
}

double mixing_density(const MixingMeasure& mm, double x, double y) {
  const Distribution& d = mm.source();
  require_source_density(d);
  const double lo = std::min(x, y), hi = std::max(x, y);
  const double kernel = d.cdf(lo) * d.survival(hi);
  const double c = mm.c();
  return kernel + (mm.variance() - c) + c * (d.pdf(x) + d.pdf(y)) -
         (marginal_density(d, x) + marginal_density(d, y));
}

double mixing_grid_minimum(const Distribution& d, double c, int grid) {
  require_source_density(d);
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  return GridTables(d, grid).minimum(c);
}

double nonnegativity_threshold(const Distribution& d, int grid) {
  require_source_density(d);
  require_unit_support(d);
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  const GridTables tables(d, grid);
  const auto feasible = [&](double c) { return tables.minimum(c) >= kNonnegativityFloor; };
  if (feasible(0.0)) return 0.0;

  // The grid minimum is concave in c. Where every slope p(x)+p(y)-1 is
  // non-negative it is also non-decreasing and doubling finds a feasible c;
  // otherwise locate its maximum first.
  double hi;
  if (tables.min_slope() >= 0.0) {
    hi = 1.0 / 1024.0;
    while (!feasible(hi)) {
      hi *= 2.0;
      if (hi > 1e12)
        throw Error(ErrorKind::InvalidArgument, "no c makes the mixing density non-negative");
    }
  } else {
    double a = 0.0, b = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (tables.minimum(m1) < tables.minimum(m2))
        a = m1;
      else
        b = m2;
    }
    hi = 0.5 * (a + b);
    if (!feasible(hi))
      throw Error(ErrorKind::InvalidArgument, "no c makes the mixing density non-negative");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double sufficient_c(const Distribution& d, double alpha) {
  if (!(alpha > 0.5))
    throw Error(ErrorKind::AlphaTooSmall, "density lower bound must exceed 1/2");
  require_source_density(d);
  const Support s = d.support();
  if (!(s.lo >= 0.0 && s.hi <= 1.0))
    throw Error(ErrorKind::UnsupportedSupport, d.describe() + " is not supported on (0,1)");
  constexpr int kProbes = 1001;
  for (int i = 0; i < kProbes; ++i) {
    const double x = (i + 0.5) / kProbes;
    const double p = d.pdf(x);
    if (p < alpha * (1.0 - 1e-12))
      throw Error(ErrorKind::DensityBelowAlpha,
                  "p(" + std::to_string(x) + ") = " + std::to_string(p) + " < alpha");
  }
  const double var = d.variance();
  return (std::sqrt(var) - var) / (2.0 * alpha - 1.0);
}

IdentityCheck verify_periodic_identity(const MixingMeasure& mm, const TestFunction& u,
                                       const TestFunction& v) {
  require_periodic(u);
  require_periodic(v);
  const double lhs = direct_covariance(mm.source(), u, v);
  const double rhs = mm.integrate(u.derivative, v.derivative);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

std::complex<double> fourier_coefficient(const MixingMeasure& mm, int k, int l) {
  const auto wave = [](int n) {
    return [n](double x) { return std::polar(1.0, kTwoPi * n * x); };
  };
  return mm.integrate(wave(k), wave(l));
}

double fourier_residual(const MixingMeasure& mm, int k, int l) {
  const auto f = [&](int n) { return mm.source().characteristic_function(kTwoPi * n); };
  if (k == 0 || l == 0) return std::abs(f(k + l) - f(k) * f(l));
  const std::complex<double> lambda_hat = fourier_coefficient(mm, k, l);
  return std::abs(f(k + l) - f(k) * f(l) + kTwoPi * kTwoPi * double(k) * double(l) * lambda_hat);
}

IdentityCheck general_mixing_check(const GeneralMixing& g, const TestFunction& u,
                                   const TestFunction& v, const QuadratureScheme& scheme) {
  require_periodic(u);
  require_periodic(v);
  const double lhs = direct_covariance(g.source, u, v, scheme);
  const double kernel = HoeffdingQuadrature(g.source, scheme).integrate(u.derivative, v.derivative);
  const double rhs = kernel + g.left.integrate(u.derivative) * against_unit(v.derivative) +
                     against_unit(u.derivative) * g.right.integrate(v.derivative);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double general_mixing_invariance(const Distribution& d, const SignedMeasure& left,
                                 const SignedMeasure& right, const TestFunction& u,
                                 const TestFunction& v) {
  return general_mixing_check({d, left, right}, u, v).residual;
}

double rescale_to_T(const MixingMeasure& mm, double period, double x, double y) {
  const Support s = mm.source().support();
  if (mm.source().family_name() != "uniform" || s.lo != 0.0 || s.hi != 1.0)
    throw Error(ErrorKind::InvalidArgument, "rescaling needs the uniform (0,1) source");
  if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "period must be positive");
  return uniform_mixing_density(mm.c(), x / period, y / period);
}

IdentityCheck verify_rescaled_identity(double c, double period, const TestFunction& u,
                                       const TestFunction& v) {
  if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "period must be positive");
  const Distribution uniform_T = Distribution::uniform(0.0, period);
  const double lhs = direct_covariance(uniform_T, u, v);
  const PanelRule rule = build_rule(0.0, period, QuadratureScheme{});
  const double rhs = integrate_square(
      rule, [&](double x, double y) { return uniform_mixing_density(c, x / period, y / period); },
      u.derivative, v.derivative);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace hoeffding
