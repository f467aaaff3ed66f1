#pragma once

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "oedflow/criteria.hpp"
#include "oedflow/problems/presets.hpp"

namespace oedflow {

/// Everything a CLI run needs. Field names match the command-line flags
/// and the keys of a `key = value` config file.
struct RunConfig {
  std::string command;  // flow, landscape, field, study-dt, study-n, fedorov
  std::string problem = "eit_homogeneous";
  Criterion criterion = Criterion::AOptimal;
  std::string init = "entire";  // entire, lshape, diagonal, uniform, fedorov, file
  std::string init_file;        // particles CSV for init = file
  std::uint64_t seed = 1;
  int N = 1000;
  double dt = 2e-7;
  int T = 50;
  int snapshot_every = 0;  // 0 = T
  double max_step_fraction = 0.1;
  std::string output_dir = "oedflow_out";
  ModelOptions model;

  // landscape
  int samples = 2000;
  int seeds = 10;
  int L_points = 17;
  // field
  int resolution = 64;
  // study-dt
  std::vector<double> dt_list;
  double horizon = 0.0;
  // study-n
  std::vector<int> N_list;
  // fedorov and init = fedorov
  int grid_per_axis = 0;  // 0 = preset default
  int max_iters = 10000;
  double tol = 1e-3;

  /// Throws ConfigError for out-of-range values and for combinations that
  /// cannot work (e.g. init = fedorov with criterion A).
  void validate() const;
};

struct ParseResult {
  RunConfig config;
  bool exit_now = false;  // help or version was printed
  int exit_code = 0;
};

/// Parses `oedflow <command> [--flag value]... [--config file]`. Values on
/// the command line override the config file. Throws ConfigError for
/// unknown keys, malformed values, or a missing command.
ParseResult parse_command_line(int argc, const char* const* argv);

/// The config as `key = value` lines, re-readable through --config.
std::string to_config_text(const RunConfig& config);

/// Name of the library error type of `e` (e.g. "SingularInformationMatrix").
std::string error_kind(const std::exception& e);

}  // namespace oedflow
