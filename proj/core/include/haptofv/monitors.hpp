#pragma once

#include <cstdint>
#include <string>

#include "haptofv/model.hpp"
#include "haptofv/state.hpp"

namespace haptofv {

struct MonitorConfig {
  double cadence = 0.01;
  double floor = 1e-12;

  // Hard checks (flag + optional abort). Entropy/dissipation evaluation can
  // be switched off entirely for throughput; the cheap ledger/barrier/mass
  // checks stay on by default.
  bool check_ledger = true;
  bool check_gronwall = true;
  bool check_barriers = true;
  bool check_entropy = true;
  bool check_gradient_l2 = true;

  // Soft Gronwall-shaped entropy cap: fitted on the first cap_fit_fraction
  // of the run, then enforced within (1 + cap_overshoot).
  bool soft_entropy_cap = true;
  double cap_fit_fraction = 0.1;
  double cap_overshoot = 0.10;

  // |per-step ledger residual| <= ledger_tolerance_factor * dt^2 * mass scale
  double ledger_tolerance_factor = 25.0;
  double barrier_slack = 1e-6;
  double gronwall_slack = 1e-6;

  bool abort_on_hard_failure = false;
  std::string failure_snapshot_path;

  void validate() const;
};

struct MonitorReport {
  double t = 0.0;
  double mass_c1 = 0.0;
  double mass_c2 = 0.0;
  double max_h = 0.0;
  double max_tau = 0.0;
  double barrier_h = 0.0;   // M_h = 1/mu + max h0
  double barrier_tau = 0.0; // M_tau = 1/sigma + max tau0
  double entropy_F = 0.0;
  double dissipation_D = 0.0;
  double dissipation_integral = 0.0;
  double grad_h_sq = 0.0;
  double grad_tau_sq = 0.0;
  double c2_sq_integral = 0.0;
  double ledger_residual = 0.0; // max |per-step residual| since last report
  bool floor_engaged = false;

  // Pass flags, true = check held (disabled checks stay true).
  bool ok_ledger = true;
  bool ok_gronwall = true;
  bool ok_barrier_h = true;
  bool ok_barrier_tau = true;
  bool ok_entropy = true;
  bool ok_dissipation_monotone = true;
  bool ok_c2sq_monotone = true;
  bool ok_gradient_l2 = true;
  bool ok_entropy_cap = true; // soft

  bool hard_ok() const {
    return ok_ledger && ok_gronwall && ok_barrier_h && ok_barrier_tau &&
           ok_entropy && ok_dissipation_monotone && ok_c2sq_monotone &&
           ok_gradient_l2;
  }
};

// Running monitor data carried across steps (and through checkpoints).
struct MonitorState {
  double m0 = 0.0; // initial total c1+c2 mass
  double barrier_h = 0.0;
  double barrier_tau = 0.0;
  double entropy_F0 = 0.0;
  double c16 = 0.0;
  bool c16_fitted = false;
  double dissipation_integral = 0.0;
  double c2_sq_integral = 0.0;
  double prev_dissipation_integral = 0.0;
  double prev_c2_sq_integral = 0.0;
  double max_ledger_residual = 0.0;
  bool floor_engaged = false;
  std::int64_t k_report = 0; // next report tick index
  std::int64_t k_save = 0;   // next trajectory save tick index
};

// Weight of the chondrocyte entropy block:
// xi = (2/a2) * ((4*gamma2*M_h + 1)*b_h/gamma1 + b_tau/delta + 1).
double xi_constant(const ModelParams& p, double M_h);

// F(s) = int(c1 ln c1 + 1/e) + xi*int(c2 ln c2 + 1/e)
//        + (b_h/(2 gamma1)) int |grad h|^2/h + (b_tau/(2 delta)) int |grad tau|^2/tau
double entropy_functional(const ModelParams& p, const State& s, double M_h,
                          double floor, bool* floor_engaged = nullptr);

// D = (a1/4) int |grad c1|^2/c1 + (1/2) int |grad c2|^2/c2
//     + (eps/2) int c1^theta ln(2+c1) + (beta/2) int c1^2 ln(2+c1)
//     + (b_h/2) int (|grad h|^2/h) c1 + (b_tau/2) int (|grad tau|^2/tau) c1
double dissipation_rate(const ModelParams& p, const Regularization& reg,
                        const State& s, double floor,
                        bool* floor_engaged = nullptr);

// Exact rate of change of the total c-mass:
// beta*int c1 (1 - c2 - tau) - beta*int c1^2 - eps*int c1^theta.
double ledger_rhs(const ModelParams& p, const Regularization& reg, const State& s);

// Residual of the discrete mass ledger over one step of size dt, with the
// right-hand side evaluated at the pre-step state.
double ledger_residual(double mass_before, double mass_after, double dt,
                       double rhs_before);

// eta = min(mu, sigma, beta); cap(t) = 2*(F0 + c16/eta*(1 - e^{-eta t})).
double entropy_cap_eta(const ModelParams& p);
double entropy_cap_value(double F0, double c16, double eta, double t);
// Least c16 >= 0 making cap(t) >= F(t) at one fit sample.
double entropy_cap_invert(double F0, double eta, double t, double F_t);

} // namespace haptofv
