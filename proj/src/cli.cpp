#include "hoeffding/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hoeffding/distribution.hpp"
#include "hoeffding/error.hpp"
#include "hoeffding/io.hpp"
#include "hoeffding/kernel.hpp"
#include "hoeffding/marginal.hpp"
#include "hoeffding/oracle.hpp"
#include "hoeffding/periodic.hpp"
#include "hoeffding/spectral.hpp"

namespace hoeffding::cli {

using json = nlohmann::ordered_json;

std::vector<double> GridSpec::points() const {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs[i] = i + 1 == count ? max : min + (max - min) * i / (count - 1);
  return xs;
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::ParseError, "grid must be min,max,count");
  GridSpec g{};
  try {
    std::size_t used = 0;
    g.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    g.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    g.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "bad grid '" + text + "'");
  }
  if (g.count < 2) throw Error(ErrorKind::ParseError, "grid count must be at least 2");
  if (!(g.min < g.max)) throw Error(ErrorKind::ParseError, "grid needs min < max");
  return g;
}

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> grid_or_default(const RunConfig& cfg, const Distribution& d, int count) {
  if (cfg.grid) return cfg.grid->points();
  const Support s = d.truncated_support();
  return GridSpec{s.lo, s.hi, count}.points();
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const KernelSurface k(d);
  const std::vector<double> xs = grid_or_default(cfg, d, 101);
  const Eigen::MatrixXd values = kernel_grid(k, xs, xs);
  if (cfg.format == "json") {
    json j = io::report("kernel");
    j["dist"] = d.describe();
    j["x"] = xs;
    j["y"] = xs;
    j["H"] = io::to_json(values);
    j["min_eigenvalue"] = min_eigenvalue(values);
    out << j.dump(2) << '\n';
  } else {
    io::write_csv_row(out, xs);
    io::write_csv_matrix(out, values);
  }
  return kSuccess;
}

int cmd_marginal(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const std::vector<double> xs = grid_or_default(cfg, d, 101);
  std::vector<double> h, h_cdf, tau;
  for (double x : xs) {
    h.push_back(marginal_density(d, x));
    h_cdf.push_back(marginal_density_cdf_form(d, x));
    const double p = d.has_density() ? d.pdf(x) : 0.0;
    tau.push_back(p > kDensityFloor && std::isfinite(p) ? h.back() / p : std::nan(""));
  }
  if (cfg.format == "json") {
    json j = io::report("marginal");
    j["dist"] = d.describe();
    j["variance"] = d.variance();
    j["x"] = xs;
    j["h"] = h;
    j["tau"] = tau;
    j["h_cdf_form"] = h_cdf;
    out << j.dump(2) << '\n';
  } else {
    const std::vector<std::string> header{"x", "h", "tau"};
    io::write_csv_header(out, header);
    for (std::size_t i = 0; i < xs.size(); ++i)
      io::write_csv_row(out, std::vector<double>{xs[i], h[i], tau[i]});
  }
  return kSuccess;
}

int cmd_stein(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  if (!d.has_density()) throw Error(ErrorKind::NoDensity, d.describe() + " has no density");
  const std::vector<double> xs = grid_or_default(cfg, d, 101);
  std::vector<double> p, h, tau;
  for (double x : xs) {
    p.push_back(d.pdf(x));
    h.push_back(marginal_density(d, x));
    tau.push_back(p.back() > kDensityFloor && std::isfinite(p.back()) ? h.back() / p.back()
                                                                       : std::nan(""));
  }
  if (cfg.format == "json") {
    json j = io::report("stein");
    j["dist"] = d.describe();
    j["x"] = xs;
    j["p"] = p;
    j["h"] = h;
    j["tau"] = tau;
    json identities = json::array();
    for (const TestFunction& u : test_library_for(d))
      identities.push_back({{"u", u.name}, {"residual", stein_identity_residual(d, u)}});
    j["stein_identity"] = identities;
    j["tv_bound"] = gaussian_tv_bound(d);
    j["characterization_residual"] = gaussian_characterization_residual(d);
    out << j.dump(2) << '\n';
  } else {
    const std::vector<std::string> header{"x", "p", "h", "tau"};
    io::write_csv_header(out, header);
    for (std::size_t i = 0; i < xs.size(); ++i)
      io::write_csv_row(out, std::vector<double>{xs[i], p[i], h[i], tau[i]});
  }
  return kSuccess;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  if (cfg.nodes < 2) throw UsageError("--nodes must be at least 2");
  if (cfg.modes < 1) throw UsageError("--modes must be positive");
  const SpectralDecomposition s = nystrom_decompose(d, cfg.nodes);
  const Eigen::Index modes = std::min<Eigen::Index>(cfg.modes, s.size());
  std::vector<double> sl(static_cast<std::size_t>(modes), std::nan(""));
  for (Eigen::Index n = 1; n <= modes; ++n) {
    try {
      sl[n - 1] = sturm_liouville_residual(s, n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IndexOutOfSpectrum) throw;
    }
  }
  if (cfg.format == "json") {
    json j = io::report("spectrum");
    j["dist"] = d.describe();
    const TraceReport t = trace_report(s, 200000, cfg.seed);
    j["alphas"] = io::to_json(Eigen::VectorXd(s.eigenvalues.head(modes)));
    j["trace_lhs"] = t.eigenvalue_sum;
    j["trace_rhs"] = t.diagonal_integral;
    j["half_mean_abs_difference"] = t.half_mean_abs_difference;
    j["mc_standard_error"] = t.mc_standard_error;
    j["seed"] = t.seed;
    j["nodes"] = io::to_json(s.nodes);
    j["sturm_liouville_residual"] = sl;
    if (cfg.points > 0 || cfg.grid) {
      const std::vector<double> xs =
          grid_or_default(cfg, d, cfg.points > 1 ? cfg.points : 101);
      j["x"] = xs;
      j["eigenfunctions"] = io::to_json(Eigen::MatrixXd(extend_eigenfunctions(s, xs, modes)));
    }
    out << j.dump(2) << '\n';
  } else {
    const std::vector<std::string> header{"n", "eigenvalue", "sturm_liouville_residual"};
    io::write_csv_header(out, header);
    for (Eigen::Index n = 0; n < modes; ++n)
      io::write_csv_row(out, std::vector<double>{double(n + 1), s.eigenvalues(n), sl[n]});
  }
  return kSuccess;
}

int cmd_mixing(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.c) throw UsageError("mixing needs --c");
  const Distribution d = parse_distribution(cfg.dist);
  const MixingMeasure mm = build_mixing(d, *cfg.c);
  const std::vector<double> xs = cfg.grid ? cfg.grid->points() : GridSpec{0.0, 1.0, 101}.points();
  Eigen::MatrixXd psi(xs.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) psi(i, j) = mixing_density(mm, xs[i], xs[j]);
  if (cfg.format == "json") {
    json j = io::report("mixing");
    j["dist"] = d.describe();
    j["c"] = mm.c();
    j["x"] = xs;
    j["y"] = xs;
    j["psi"] = io::to_json(psi);
    j["grid_minimum"] = mixing_grid_minimum(d, mm.c());
    j["nonnegativity_threshold"] = nonnegativity_threshold(d);
    out << j.dump(2) << '\n';
  } else {
    io::write_csv_row(out, xs);
    io::write_csv_matrix(out, psi);
  }
  return kSuccess;
}

struct Check {
  std::string kind, u, v;
  double lhs, rhs, residual, tolerance;
  std::optional<McEstimate> mc = std::nullopt;
};

std::vector<double> default_freqs() { return {-4, -2, -1, -0.5, 0.5, 1, 2, 4}; }

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const std::vector<TestFunction> library = test_library_for(d);
  std::vector<Check> checks;

  for (std::size_t i = 0; i < library.size(); ++i) {
    for (std::size_t j = i; j < library.size(); ++j) {
      const TestFunction& u = library[i];
      const TestFunction& v = library[j];
      const double lhs = direct_covariance(d, u, v);
      const double rhs = hoeffding_covariance(d, u, v);
      const McEstimate e = mc_covariance(d, u, v, 20000, cfg.seed + i * library.size() + j);
      checks.push_back(
          {"hoeffding", u.name, v.name, lhs, rhs, std::abs(lhs - rhs), cfg.tol, e});
    }
  }
  if (d.has_density()) {
    for (const TestFunction& u : library) {
      const double r = stein_identity_residual(d, u);
      checks.push_back({"stein", u.name, "", std::nan(""), std::nan(""), r, cfg.tol});
    }
  }
  const KernelSurface k(d);
  const std::vector<double> freqs = cfg.freqs.empty() ? default_freqs() : cfg.freqs;
  for (double t : freqs) {
    for (double s : freqs) {
      const auto closed = fourier_lambda_hat(k, t, s);
      const auto quad = fourier_lambda_hat_quadrature(k, t, s);
      checks.push_back({"fourier", std::to_string(t), std::to_string(s), std::abs(closed),
                        std::abs(quad), std::abs(closed - quad),
                        std::max(cfg.tol, kFourierTolerance)});
    }
  }
  if (cfg.c) {
    const MixingMeasure mm = build_mixing(d, *cfg.c);
    const std::vector<TestFunction> periodic = test_library(true);
    for (std::size_t i = 0; i < periodic.size(); ++i) {
      for (std::size_t j = i; j < periodic.size(); ++j) {
        const IdentityCheck r = verify_periodic_identity(mm, periodic[i], periodic[j]);
        checks.push_back(
            {"periodic", periodic[i].name, periodic[j].name, r.lhs, r.rhs, r.residual, cfg.tol});
      }
    }
    for (int kk = -cfg.kmax; kk <= cfg.kmax; ++kk) {
      for (int l = -cfg.kmax; l <= cfg.kmax; ++l) {
        checks.push_back({"integer_fourier", std::to_string(kk), std::to_string(l), std::nan(""),
                          std::nan(""), fourier_residual(mm, kk, l), cfg.tol});
      }
    }
  }

  bool passed = true;
  double worst = 0.0;
  for (const Check& c : checks) {
    if (!(c.residual <= c.tolerance)) passed = false;
    worst = std::max(worst, c.residual);
  }

  if (cfg.format == "csv") {
    out << "kind,u,v,lhs,rhs,residual,tolerance\n";
    for (const Check& c : checks) {
      out << c.kind << ',' << c.u << ',' << c.v << ',' << io::format_double(c.lhs) << ','
          << io::format_double(c.rhs) << ',' << io::format_double(c.residual) << ','
          << io::format_double(c.tolerance) << '\n';
    }
  } else {
    json j = io::report("verify");
    j["dist"] = d.describe();
    if (cfg.c) j["c"] = *cfg.c;
    j["seed"] = cfg.seed;
    json arr = json::array();
    for (const Check& c : checks) {
      json row{{"kind", c.kind}, {"u", c.u}};
      if (!c.v.empty()) row["v"] = c.v;
      if (std::isfinite(c.lhs)) row["lhs"] = c.lhs;
      if (std::isfinite(c.rhs)) row["rhs"] = c.rhs;
      if (c.mc) {
        // Informational: the Monte Carlo estimate is not gated.
        row["direct"] = c.lhs;
        row["kernel"] = c.rhs;
        row["mc"] = c.mc->estimate;
        row["stderr"] = c.mc->standard_error;
        row["seed"] = c.mc->seed;
      }
      row["residual"] = c.residual;
      row["tolerance"] = c.tolerance;
      arr.push_back(row);
    }
    j["checks"] = arr;
    j["max_residual"] = worst;
    j["passed"] = passed;
    out << j.dump(2) << '\n';
  }
  return passed ? kSuccess : kVerificationFailed;
}

int cmd_fourier(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  json j = io::report("fourier");
  j["dist"] = d.describe();
  if (cfg.c) {
    // Integer frequencies of the mixing measure.
    const MixingMeasure mm = build_mixing(d, *cfg.c);
    std::vector<std::vector<double>> rows;
    for (int k = -cfg.kmax; k <= cfg.kmax; ++k) {
      for (int l = -cfg.kmax; l <= cfg.kmax; ++l) {
        const auto coeff = fourier_coefficient(mm, k, l);
        rows.push_back({double(k), double(l), coeff.real(), coeff.imag(), fourier_residual(mm, k, l)});
      }
    }
    if (cfg.format == "json") {
      j["c"] = mm.c();
      json arr = json::array();
      for (const auto& r : rows)
        arr.push_back({{"k", int(r[0])}, {"l", int(r[1])}, {"re", r[2]}, {"im", r[3]}, {"residual", r[4]}});
      j["coefficients"] = arr;
      out << j.dump(2) << '\n';
    } else {
      out << "k,l,re,im,residual\n";
      for (const auto& r : rows) io::write_csv_row(out, r);
    }
    return kSuccess;
  }

  const KernelSurface k(d);
  const std::vector<double> freqs = cfg.freqs.empty() ? default_freqs() : cfg.freqs;
  std::vector<std::vector<double>> rows;
  for (double t : freqs) {
    for (double s : freqs) {
      const auto closed = fourier_lambda_hat(k, t, s);
      const auto quad = fourier_lambda_hat_quadrature(k, t, s);
      rows.push_back({t, s, closed.real(), closed.imag(), quad.real(), quad.imag(),
                      std::abs(closed - quad)});
    }
  }
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"t", r[0]}, {"s", r[1]}, {"closed_re", r[2]}, {"closed_im", r[3]},
                     {"quadrature_re", r[4]}, {"quadrature_im", r[5]}, {"abs_diff", r[6]}});
    }
    j["lambda_hat"] = arr;
    out << j.dump(2) << '\n';
  } else {
    out << "t,s,closed_re,closed_im,quadrature_re,quadrature_im,abs_diff\n";
    for (const auto& r : rows) io::write_csv_row(out, r);
  }
  return kSuccess;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("HOEFFDING_SEED");
  if (!s || !*s) return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(std::string("HOEFFDING_SEED is not an unsigned integer: ") + s);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Höffding kernels, Stein kernels, Mercer spectra and periodic mixing measures",
               "hoeffding-lab"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_text;
  std::optional<std::uint64_t> seed;

  const std::map<std::string, std::string> help{
      {"kernel", "Höffding kernel H on a grid"},
      {"marginal", "marginal density h on a grid"},
      {"stein", "Stein kernel, identity residuals and TV bound"},
      {"spectrum", "Nyström eigenpairs and trace report"},
      {"mixing", "periodic mixing density psi on a grid"},
      {"verify", "check every covariance identity; exit 2 on any residual above tolerance"},
      {"fourier", "Fourier transform of the Höffding or mixing measure"},
  };
  for (const auto& [name, description] : help) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--dist", cfg.dist, "distribution, e.g. uniform:a=0,b=1")->required();
    sub->add_option("--grid", grid_text, "min,max,count");
    sub->add_option("--c", cfg.c, "marginal multiplier of the mixing measure");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--seed", seed, "Monte Carlo seed (default: $HOEFFDING_SEED or 1)");
    sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--nodes", cfg.nodes, "Nyström nodes");
    sub->add_option("--modes", cfg.modes, "eigenpairs to report");
    sub->add_option("--points", cfg.points, "eigenfunction evaluation points");
    sub->add_option("--freqs", cfg.freqs, "frequencies for the transform grid")->delimiter(',');
    sub->add_option("--kmax", cfg.kmax, "largest integer frequency")->check(CLI::NonNegativeNumber);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> commands{
      {"kernel", cmd_kernel},   {"marginal", cmd_marginal}, {"stein", cmd_stein},
      {"spectrum", cmd_spectrum}, {"mixing", cmd_mixing},   {"verify", cmd_verify},
      {"fourier", cmd_fourier},
  };
  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    cfg.seed = seed ? *seed : env_seed();
    if (cfg.format.empty()) cfg.format = cfg.subcommand == "verify" ? "json" : "csv";

    if (cfg.out.empty()) return commands.at(cfg.subcommand)(cfg, out);
    std::ofstream file(cfg.out);
    if (!file) throw UsageError("cannot open " + cfg.out);
    const int code = commands.at(cfg.subcommand)(cfg, file);
    if (!file.flush()) throw UsageError("failed writing " + cfg.out);
    return code;
  } catch (const std::exception& e) {
    err << "hoeffding-lab " << cfg.subcommand << ": " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace hoeffding::cli
