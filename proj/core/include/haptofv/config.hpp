#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "haptofv/analysis.hpp"
#include "haptofv/monitors.hpp"
#include "haptofv/state.hpp"
#include "haptofv/stepper.hpp"

namespace haptofv {

struct ConfigError : std::runtime_error {
  int line = 0;
  explicit ConfigError(const std::string& msg, int line_no = 0)
      : std::runtime_error(msg), line(line_no) {}
};

struct InitSpec {
  enum class Kind { constant, cosine, gaussian };
  Kind kind = Kind::constant;
  double value = 0.0;   // constant
  double offset = 0.0;  // cosine/gaussian baseline
  double amplitude = 0.0;
  int kx = 1;           // cosine mode numbers
  int ky = 1;
  double width = 0.1;   // gaussian width (absolute units)
  double center_x = 0.5;
  double center_y = 0.5;
};

enum class RunMode { simulate, sweep, convergence, weakcheck };

struct RunConfig {
  RunMode mode = RunMode::simulate;
  Grid grid;
  ModelParams params;
  Regularization reg;
  StepControl control;
  MonitorConfig monitors;
  double save_cadence = 0.005;

  InitSpec init_c1;
  InitSpec init_c2;
  InitSpec init_h;
  InitSpec init_tau;

  std::string series_path = "series.csv";
  std::string snapshot_path;   // final state; empty: skip
  std::string checkpoint_path; // rewritten at each report tick; empty: skip
  std::string sweep_csv_path = "sweep.csv";

  std::vector<double> sweep_eps = {0.1, 0.05, 0.025, 0.0125};
  int sweep_threads = 0;
  std::vector<int> convergence_n = {32, 64, 128, 256};
  bool defeq4_sign_corrected = true;
};

// Demo defaults (1D, N=256) documented in README; key=value text with
// dotted prefixes overrides them. Unknown keys and invariant violations
// throw ConfigError with the offending line.
RunConfig default_config();
RunConfig parse_config(std::string_view text);
RunConfig parse_config_file(const std::string& path);

// Canonical serialization of every key (stable ordering); its FNV-1a hash
// identifies a config in checkpoints.
std::string dump_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

// Strictly positive h0/tau0 and nonnegative, somewhere-positive c10/c20,
// all bounded and smooth; throws ConfigError when the requested initial
// data cannot satisfy the positivity requirements.
State build_initial_state(const RunConfig& cfg);

} // namespace haptofv
