#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hyperfermi::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kCapacityError = 3 };

struct RunConfig {
  std::string command;

  std::string graph_path;
  std::string lattice;

  std::string beta = "1/10";
  std::string eps = "0";
  int m = 1;
  std::string mode = "exact";
  std::string out;
  std::uint64_t seed = 1;
  int trials = 20;
  bool timing = false;

  // two-point
  int i = 0;
  int j = 0;

  // bound
  std::string interaction = "nn";
  int d = 1;
  double dist = 1;
  double a = 2;
  std::string metric = "euclidean";
  double C = std::exp(1.0);
  double C_activity = 1;

  // verify-single-site
  int m_max = 6;
  int r_m_max = 40;
  int one_point_m_max = 10;
  std::vector<std::string> eps_list = {"0", "1/2", "1", "3"};

  // constants
  bool extract = false;
  int y_max = 0;
  std::vector<std::string> beta_list;
  std::vector<int> m_list;
};

/// Executes one command and writes the report (JSON, or CSV for
/// `constants --extract`) to `out`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to run(); the report goes to --out or `out`.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperfermi::cli
