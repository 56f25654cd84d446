#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pricer {

/// Resolved settings of one CLI invocation. Defaults are the reference
/// configuration (k=3, r=0.05, sigma=0.2, A=1, alpha=0.05, p=2, T=1).
struct RunConfig {
  double k = 3.0;
  double r = 0.05;
  double sigma = 0.2;
  double notional = 1.0;
  double decay_rate = 0.05;
  double shape = 2.0;
  double maturity = 1.0;
  std::vector<double> t{0.0};
  std::vector<double> s;  // empty: {0.5, 1, 1.5} x payoff peak
  std::string method = "spectral";
  int terms = 64;
  std::string quad_rule = "graded";
  int quad_nodes = 200;
  double fd_smax = 0.0;  // 0: 5 x payoff peak
  int fd_nspace = 3000;
  int fd_ntime = 2000;
  std::string fd_far_field = "asymptotic";
  int mc_paths = 200000;
  int mc_steps = 500;
  std::uint64_t mc_seed = 20240611;
  std::string mc_scheme = "cir";
  int mc_workers = 0;
  std::string format = "json";
  std::string output;
  std::vector<int> n_list{8, 16, 32, 64};
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_io = 1;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_validation = 4;

inline constexpr const char* schema_version = "1.0";

/// Runs the CLI on `args` (without the program name). Documents go to `out`
/// (or --output), errors and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pricer
