#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chj/common.hpp"

namespace chj {

/// Raised for any invalid configuration; maps to exit code 2.
class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Thrown by parse_config for --help; carries the generated usage text.
struct HelpRequested {
  std::string text;
};

struct RunConfig {
  std::string command;

  std::string hamiltonian = "quadratic";
  std::string H = "contact";
  std::string F = "2*contact";

  int dim = 1;
  double L = 4.0;
  int n = 201;
  std::string boundary = "clamped";

  std::vector<double> dts{1e-3};
  std::optional<double> vmax;
  std::optional<int> vpoints;
  bool refine = false;

  std::vector<double> t{1.0};  // a single time, or the multi-time vector
  double lambda = 0.25, mu = 0.25, k = 2.0;

  std::string box = "x=-3:3,p=-3:3,u=-2:2";
  int samples = 9;
  std::optional<double> dx_cap;

  std::string u0 = "cos(x)";
  double x = 0.0, u = 0.0;
  double pmax = 2.0;
  int ppoints = 81;

  int K = 4;
  std::vector<double> vels{-2.0, -1.0, 0.0, 1.0, 2.0};
  int rounds = 5;

  std::string out;
  std::uint64_t seed = 0x5EED;
  bool strict = false;
  int workers = 0;  // 0: leave the OpenMP default

  std::vector<int> criteria;  // selftest: empty runs all
  bool artifacts_only = false;

  double dt() const { return dts.front(); }
};

/// Parses arguments (without the program name). A `--config FILE` argument
/// pulls key = value lines from FILE in ahead of the command line, so later
/// command-line values win. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs a parsed configuration; returns 0, 1 (numerical failure) or 2
/// (configuration error).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config + run with exit-code mapping; the body of the executable.
int cli_main(int argc, char** argv);

}  // namespace chj
