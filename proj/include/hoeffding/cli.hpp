#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hoeffding::cli {

struct GridSpec {
  double min;
  double max;
  int count;

  std::vector<double> points() const;
};

/// Parses "min,max,count"; count >= 2 and min < max.
GridSpec parse_grid(const std::string& text);

struct RunConfig {
  std::string subcommand;
  std::string dist;
  std::optional<GridSpec> grid;
  std::optional<double> c;
  std::string format;  // csv | json; empty picks the subcommand default
  std::string out;     // empty for standard output
  std::uint64_t seed = 1;
  double tol = 1e-6;
  int nodes = 400;
  int modes = 10;
  int points = 0;
  std::vector<double> freqs;
  int kmax = 3;
};

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kVerificationFailed = 2 };

/// Entry point behind the hoeffding-lab executable; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoeffding::cli
