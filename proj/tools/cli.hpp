#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "lmg/io/figure.hpp"

namespace lmg::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kIoFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

// Every knob of a run. Defaults depend on the command and are filled in by
// defaults_for(); the complete struct is echoed into the metadata sidecar so a
// run can be repeated from it alone.
struct RunConfig {
  std::string command;
  std::vector<int> n;
  double gamma = 0.0;
  double h = 1.5;
  double h_initial = 1.5;
  std::vector<double> h_final;
  double h_min = 0.0;
  double h_max = 2.0;
  double h_step = 0.01;
  int levels = 5;
  double t_min = 0.0;
  double t_max = 10.0;
  int t_points = 2001;
  int search_points = 4000;
  double time_tolerance = 1e-6;
  double threshold = 1e-3;
  double sensitivity_threshold = 0.0;  // 0 disables the second h0 pass
  double scan_start = 1.4;
  double scan_end = 0.5;
  double scan_step = 0.005;
  double eta = 0.05;
  int omega_points = 2000;
  double omega_min = 0.0;  // omega_min == omega_max selects the automatic range
  double omega_max = 0.0;
  bool dump_matrix = false;
  std::string output_dir = ".";
  std::string stem;
  std::string plot;
  int threads = 1;
};

const std::vector<std::string>& commands();
RunConfig defaults_for(const std::string& command);
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Runs a validated config and writes its outputs. Returns the bundle written.
io::ResultBundle run(RunConfig& cfg);

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmg::cli
