#pragma once

#include <array>
#include <vector>

#include "haptofv/stepper.hpp"

namespace haptofv {

// Smooth test function: sum of separable terms
//   amp * cos(kx pi x / Lx) * cos(ky pi y / Ly) * (1 - t/T)^q,  q >= 2,
// so the normal derivative vanishes on the boundary and phi(.,T) = 0.
struct TestFunctionTerm {
  double amp = 1.0;
  int kx = 0;
  int ky = 0;
  int q = 2;
};

struct TestFunction {
  std::vector<TestFunctionTerm> terms;

  static TestFunction cosine(int kx, int ky, int q, double amp = 1.0);

  double value(const Grid& g, double x, double y, double t, double T) const;
  double dt_value(const Grid& g, double x, double y, double t, double T) const;
  double grad_x(const Grid& g, double x, double y, double t, double T) const;
  double grad_y(const Grid& g, double x, double y, double t, double T) const;
};

enum class WeakEquation { c1, c2, h, tau };

struct WeakOptions {
  // The weak identity is evaluated with these eps-terms (saturated exchange,
  // eps gradient terms for h/tau, damping). 0 gives the limit identities.
  double eps_in_form = 0.0;
  int theta = 4; // damping exponent in the eps form
  // The tau source term enters as +c2/(1+c2) when true (the strong-form
  // sign); false evaluates the as-printed variant with the minus.
  bool defeq4_sign_corrected = true;
};

// Signed residual LHS - RHS of the selected space-time weak identity for a
// stored trajectory: midpoint cell quadrature in space (face-based for
// gradient pairings) and trapezoid in time at the save cadence.
double weak_residual(const Trajectory& traj, const ModelParams& p,
                     const TestFunction& phi, WeakEquation eq,
                     const WeakOptions& opt);

struct SweepSetup {
  ModelParams params;
  int theta = 4;
  State initial;
  StepControl control;
  MonitorConfig monitors;
  double save_cadence = 0.0;
  std::vector<double> eps_list;
  std::vector<TestFunction> test_functions;
  int threads = 0; // 0: HAPTOFV_THREADS env var, else hardware concurrency
};

struct SweepResult {
  std::vector<double> eps_list;
  // Per member run: any hard monitor check failed during that run.
  std::vector<bool> member_hard_failure;
  // [pair j][species 0..3: c1,c2,h,tau] L2(Omega x (0,T)) difference between
  // runs j and j+1.
  std::vector<std::array<double, 4>> pairwise_l2;
  // [eps i][equation 0..3][test function k], sign-corrected.
  // form-consistent: eps-terms of the run's own eps; limit: eps-terms 0.
  std::vector<std::array<std::vector<double>, 4>> weak_residuals_form;
  std::vector<std::array<std::vector<double>, 4>> weak_residuals_limit;
};

// Runs the same problem once per eps (concurrently when allowed), then the
// Cauchy-difference and weak-residual studies on the stored trajectories.
SweepResult epsilon_sweep(const SweepSetup& setup);

struct ConvergenceSetup {
  std::vector<int> heat_n_list = {32, 64, 128, 256};
  double heat_a2 = 0.05;
  double heat_offset = 1.0;
  double heat_amplitude = 0.5;
  double heat_dt_coarsest = 2e-3; // scaled by (n0/n)^2
  double t_end = 1.0;
  double lx = 1.0;

  int decay_n = 64;
  double decay_mu = 1.0;
  double decay_sigma = 0.8;
  double decay_dt = 1e-3;

  int const_n = 64;
  double const_dt = 1e-3;
};

struct ConvergenceResult {
  std::vector<int> heat_n;
  std::vector<double> heat_l2_error;
  std::vector<double> heat_order; // between consecutive n
  double decay_h_rel_error = 0.0;
  double decay_tau_rel_error = 0.0;
  double const_max_error = 0.0;
};

// Decoupled manufactured problems: pure heat mode for c2 (exact separable
// solution), pure exponential decay for h/tau, constant data (exact at all
// resolutions).
ConvergenceResult manufactured_convergence(const ConvergenceSetup& setup);

} // namespace haptofv
