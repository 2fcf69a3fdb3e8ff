#pragma once

#include <functional>
#include <vector>

#include "haptofv/model.hpp"
#include "haptofv/monitors.hpp"
#include "haptofv/operators.hpp"
#include "haptofv/state.hpp"

namespace haptofv {

struct StepControl {
  double dt_max = 1e-3;
  double cfl_safety = 0.45;
  double t_end = 1.0;
  double floor = 1e-12;

  void validate() const;
};

// Largest safe step: cfl_safety * min(dt_max, advective bound, reaction
// bound). The advective bound is 1/max over cells of the total outflow
// rate (sum of outgoing face speeds / spacing), which keeps the explicit
// transport update's diagonal coefficient nonnegative; the reaction bound
// is 1/max total sink coefficient.
double stable_dt(const ModelParams& p, const Regularization& reg,
                 const State& s, const StepControl& ctl);

// Preallocated buffers reused across steps.
struct StepWorkspace {
  FaceFluxes vel;
  Field outflow;
  Field inflow;
  Field scratch_a;
  Field scratch_b;
  std::vector<double> tri_b;
  std::vector<double> tri_r;
  std::vector<double> tri_cp;

  explicit StepWorkspace(const Grid& g);
};

// One positivity-preserving IMEX step: explicit upwind transport and
// explicit nonnegative sources, then Patankar semi-implicit sinks, then
// implicit diffusion (direct tridiagonal solves; factored x/y sweeps in
// 2D). Requires dt <= stable_dt; output is nonnegative by construction
// and never clipped (negative output throws, signalling a scheme bug).
void step_in_place(const ModelParams& p, const Regularization& reg, State& s,
                   double dt, StepWorkspace& ws);
State step(const ModelParams& p, const Regularization& reg, const State& s,
           double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> frames;
  double eps = 0.0;
};

struct RunOptions {
  StepControl control;
  MonitorConfig monitors;
  double save_cadence = 0.0; // 0: record no trajectory
  // Invoked after every report tick (checkpoint writers etc.); must not
  // mutate the run.
  std::function<void(const MonitorReport&, const State&, const MonitorState&)>
      on_report;
};

struct RunResult {
  State final_state;
  std::vector<MonitorReport> reports;
  Trajectory trajectory;
  MonitorState monitor_state; // as of t_end; feeds checkpoints
  bool hard_failure = false;
};

// Advance from s0 to t_end, clamping steps to the report/save tick lattice,
// evaluating monitors at every report tick. Resuming with the MonitorState
// from a checkpoint continues the original run bit-exactly.
RunResult run(const ModelParams& p, const Regularization& reg, const State& s0,
              const RunOptions& opt, const MonitorState* resume = nullptr);

} // namespace haptofv
