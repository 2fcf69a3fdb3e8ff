#include "haptofv/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "haptofv/numerics.hpp"
#include "haptofv/operators.hpp"

namespace haptofv {

void MonitorConfig::validate() const {
  if (!(cadence > 0.0) || !std::isfinite(cadence)) {
    throw std::invalid_argument("monitors.cadence must be positive and finite");
  }
  if (!(floor > 0.0)) {
    throw std::invalid_argument("monitors.floor must be positive");
  }
  if (!(cap_fit_fraction > 0.0) || !(cap_fit_fraction < 1.0)) {
    throw std::invalid_argument("monitors.cap_fit_fraction must lie in (0, 1)");
  }
  if (!(cap_overshoot >= 0.0)) {
    throw std::invalid_argument("monitors.cap_overshoot must be nonnegative");
  }
  if (!(ledger_tolerance_factor > 0.0)) {
    throw std::invalid_argument("monitors.ledger_tolerance_factor must be positive");
  }
  if (!(barrier_slack >= 0.0) || !(gronwall_slack >= 0.0)) {
    throw std::invalid_argument("monitors slack values must be nonnegative");
  }
}

namespace {

// s ln s, continuously extended by 0 at s = 0.
double xlogx(double s) { return s > 0.0 ? s * std::log(s) : 0.0; }

constexpr double kInvE = 0.36787944117144233; // 1/e

double integrate_cellwise(const Grid& g, const std::vector<double>& vals) {
  return pairwise_sum(vals) * g.cell_volume();
}

} // namespace

double xi_constant(const ModelParams& p, double M_h) {
  return (2.0 / p.a2) *
         ((4.0 * p.gamma2 * M_h + 1.0) * p.b_h / p.gamma1 + p.b_tau / p.delta + 1.0);
}

double entropy_functional(const ModelParams& p, const State& s, double M_h,
                          double floor, bool* floor_engaged) {
  s.validate();
  if (!(M_h > 0.0)) throw std::invalid_argument("entropy: barrier must be positive");
  const Grid& g = s.grid();
  const std::size_t n = g.cells();

  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = xlogx(s.c1[i]) + kInvE;
  const double f_c1 = integrate_cellwise(g, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = xlogx(s.c2[i]) + kInvE;
  const double f_c2 = integrate_cellwise(g, tmp);

  bool engaged = false;
  bool fe = false;
  const double q_h = integrate_grad_sq_over(s.h, floor, nullptr, &fe);
  engaged = engaged || fe;
  fe = false;
  const double q_tau = integrate_grad_sq_over(s.tau, floor, nullptr, &fe);
  engaged = engaged || fe;
  if (floor_engaged) *floor_engaged = engaged;

  return f_c1 + xi_constant(p, M_h) * f_c2 +
         (p.b_h / (2.0 * p.gamma1)) * q_h + (p.b_tau / (2.0 * p.delta)) * q_tau;
}

double dissipation_rate(const ModelParams& p, const Regularization& reg,
                        const State& s, double floor, bool* floor_engaged) {
  s.validate();
  const Grid& g = s.grid();
  const std::size_t n = g.cells();

  bool engaged = false;
  bool fe = false;
  const double q_c1 = integrate_grad_sq_over(s.c1, floor, nullptr, &fe);
  engaged = engaged || fe;
  fe = false;
  const double q_c2 = integrate_grad_sq_over(s.c2, floor, nullptr, &fe);
  engaged = engaged || fe;
  fe = false;
  const double q_h = integrate_grad_sq_over(s.h, floor, &s.c1, &fe);
  engaged = engaged || fe;
  fe = false;
  const double q_tau = integrate_grad_sq_over(s.tau, floor, &s.c1, &fe);
  engaged = engaged || fe;
  if (floor_engaged) *floor_engaged = engaged;

  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c1v = s.c1[i];
    tmp[i] = std::log(2.0 + c1v) *
             (0.5 * reg.eps * ipow(c1v, reg.theta) + 0.5 * p.beta * c1v * c1v);
  }
  const double poly = integrate_cellwise(g, tmp);

  return 0.25 * p.a1 * q_c1 + 0.5 * q_c2 + poly + 0.5 * p.b_h * q_h +
         0.5 * p.b_tau * q_tau;
}

double ledger_rhs(const ModelParams& p, const Regularization& reg, const State& s) {
  const Grid& g = s.grid();
  const std::size_t n = g.cells();
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c1v = s.c1[i];
    tmp[i] = p.beta * c1v * (1.0 - c1v - s.c2[i] - s.tau[i]) -
             reg.eps * ipow(c1v, reg.theta);
  }
  return integrate_cellwise(g, tmp);
}

double ledger_residual(double mass_before, double mass_after, double dt,
                       double rhs_before) {
  return (mass_after - mass_before) - dt * rhs_before;
}

double entropy_cap_eta(const ModelParams& p) {
  return std::min({p.mu, p.sigma, p.beta});
}

double entropy_cap_value(double F0, double c16, double eta, double t) {
  return 2.0 * (F0 + c16 / eta * (1.0 - std::exp(-eta * t)));
}

double entropy_cap_invert(double F0, double eta, double t, double F_t) {
  const double need = 0.5 * F_t - F0;
  if (need <= 0.0) return 0.0;
  const double denom = 1.0 - std::exp(-eta * t);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return need * eta / denom;
}

} // namespace haptofv
