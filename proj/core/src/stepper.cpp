#include "haptofv/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "haptofv/numerics.hpp"

namespace haptofv {

namespace {

double alpha_raw(const TransitionFn& fn, double z) {
  if (fn.form == TransitionFn::Form::constant) return fn.a;
  return fn.a + fn.b * z / (1.0 + z);
}

// Face velocity of the combined haptotactic drift: b_h grad h + b_tau grad tau.
void combined_velocity(const ModelParams& p, const State& s, FaceFluxes& vel) {
  const Grid& g = s.grid();
  const double ihx = 1.0 / g.hx();
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      vel.x[vel.xface(ixf, iy)] =
          (p.b_h * (s.h[l + 1] - s.h[l]) + p.b_tau * (s.tau[l + 1] - s.tau[l])) * ihx;
    }
  }
  if (g.dim == 2) {
    const double ihy = 1.0 / g.hy();
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        vel.y[vel.yface(ix, iyf)] =
            (p.b_h * (s.h[l + g.nx] - s.h[l]) + p.b_tau * (s.tau[l + g.nx] - s.tau[l])) * ihy;
      }
    }
  }
}

// Donor-cell bookkeeping: outflow[i] = total outgoing speed / spacing
// (a rate), inflow[i] = incoming mass rate from donor neighbours. Pass
// inflow = nullptr to collect only the outflow rates (stable_dt path).
void transport_rates(const Field& c1, const FaceFluxes& vel, Field& outflow,
                     Field* inflow) {
  const Grid& g = c1.grid;
  for (auto& x : outflow.v) x = 0.0;
  if (inflow)
    for (auto& x : inflow->v) x = 0.0;
  const double ihx = 1.0 / g.hx();
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      const double v = vel.x[vel.xface(ixf, iy)];
      if (v > 0.0) {
        outflow[l] += v * ihx;
        if (inflow) (*inflow)[l + 1] += v * ihx * c1[l];
      } else if (v < 0.0) {
        outflow[l + 1] -= v * ihx;
        if (inflow) (*inflow)[l] -= v * ihx * c1[l + 1];
      }
    }
  }
  if (g.dim == 2) {
    const double ihy = 1.0 / g.hy();
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        const double v = vel.y[vel.yface(ix, iyf)];
        if (v > 0.0) {
          outflow[l] += v * ihy;
          if (inflow) (*inflow)[l + g.nx] += v * ihy * c1[l];
        } else if (v < 0.0) {
          outflow[l + g.nx] -= v * ihy;
          if (inflow) (*inflow)[l] -= v * ihy * c1[l + g.nx];
        }
      }
    }
  }
}

// Total Patankar sink coefficients at one cell, by species.
struct SinkRates {
  double c1, c2, h, tau;
};

SinkRates sink_rates(const ModelParams& p, const Regularization& reg, double c1,
                     double c2, double /*h*/, double tau) {
  SinkRates r;
  const double al1 = alpha_raw(p.alpha1, tau);
  const double al2 = alpha_raw(p.alpha2, tau);
  r.c1 = al1 + p.beta * (c1 + c2 + tau) + reg.eps * ipow(c1, reg.theta - 1);
  r.c2 = al2 / (1.0 + reg.eps * c2);
  r.h = p.gamma1 * c1 + p.gamma2 * c2 + p.mu;
  r.tau = p.delta * c1 + p.sigma;
  return r;
}

// Solve (I - k*Lap_axis) u = u in place along every grid line of one axis.
// The matrix is tridiagonal with diagonal 1 + k*(neighbour count) and
// off-diagonals -k; all elimination intermediates are nonnegative, so the
// solve cannot manufacture a negative value from nonnegative data.
void solve_diffusion_lines(Field& u, double k, int n, std::size_t base,
                           std::size_t stride, std::vector<double>& pp,
                           std::vector<double>& dp) {
  double denom = 1.0 + k;
  pp[0] = k / denom;
  dp[0] = u[base] / denom;
  for (int i = 1; i < n; ++i) {
    const double diag = 1.0 + k * (i + 1 < n ? 2.0 : 1.0);
    denom = diag - k * pp[i - 1];
    dp[i] = (u[base + stride * i] + k * dp[i - 1]) / denom;
    pp[i] = k / denom;
  }
  u[base + stride * (n - 1)] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    u[base + stride * i] = dp[i] + pp[i] * u[base + stride * (i + 1)];
  }
}

void diffuse(Field& u, double coef, double dt, std::vector<double>& pp,
             std::vector<double>& dp) {
  if (coef == 0.0) return;
  const Grid& g = u.grid;
  const double kx = dt * coef / (g.hx() * g.hx());
  for (int iy = 0; iy < g.ny; ++iy) {
    solve_diffusion_lines(u, kx, g.nx, g.index(0, iy), 1, pp, dp);
  }
  if (g.dim == 2) {
    const double ky = dt * coef / (g.hy() * g.hy());
    for (int ix = 0; ix < g.nx; ++ix) {
      solve_diffusion_lines(u, ky, g.ny, static_cast<std::size_t>(ix), g.nx, pp, dp);
    }
  }
}

} // namespace

void StepControl::validate() const {
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) {
    throw std::invalid_argument("control.dt_max must be positive and finite");
  }
  if (!(cfl_safety > 0.0) || !(cfl_safety <= 1.0)) {
    throw std::invalid_argument("control.cfl_safety must lie in (0, 1]");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("control.t_end must be nonnegative and finite");
  }
  if (!(floor > 0.0)) {
    throw std::invalid_argument("control.floor must be positive");
  }
}

double stable_dt(const ModelParams& p, const Regularization& reg, const State& s,
                 const StepControl& ctl) {
  ctl.validate();
  s.validate();
  const Grid& g = s.grid();

  FaceFluxes vel(g);
  combined_velocity(p, s, vel);
  Field outflow(g);
  transport_rates(s.c1, vel, outflow, nullptr);
  double max_out = 0.0;
  for (double r : outflow.v) max_out = std::max(max_out, r);

  double max_sink = 0.0;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const SinkRates r = sink_rates(p, reg, s.c1[i], s.c2[i], s.h[i], s.tau[i]);
    max_sink = std::max({max_sink, r.c1, r.c2, r.h, r.tau});
  }

  double dt = ctl.dt_max;
  if (max_out > 0.0) dt = std::min(dt, (1.0 - 1e-12) / max_out);
  if (max_sink > 0.0) dt = std::min(dt, 1.0 / max_sink);
  return ctl.cfl_safety * dt;
}

StepWorkspace::StepWorkspace(const Grid& g)
    : vel(g),
      outflow(g),
      inflow(g),
      scratch_a(g),
      scratch_b(g),
      tri_b(static_cast<std::size_t>(std::max(g.nx, g.ny))),
      tri_r(static_cast<std::size_t>(std::max(g.nx, g.ny))),
      tri_cp(static_cast<std::size_t>(std::max(g.nx, g.ny))) {}

void step_in_place(const ModelParams& p, const Regularization& reg, State& s,
                   double dt, StepWorkspace& ws) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  const Grid& g = s.grid();
  if (!(ws.outflow.grid == g)) throw std::invalid_argument("step: workspace grid mismatch");

  combined_velocity(p, s, ws.vel);
  transport_rates(s.c1, ws.vel, ws.outflow, &ws.inflow);

  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double c1v = s.c1[i], c2v = s.c2[i], hv = s.h[i], tv = s.tau[i];
    const double al1 = alpha_raw(p.alpha1, tv);
    const double al2 = alpha_raw(p.alpha2, tv);

    const double keep = 1.0 - dt * ws.outflow[i];
    if (keep < 0.0) {
      throw std::invalid_argument("step: dt exceeds the transport stability bound");
    }
    const SinkRates rate = sink_rates(p, reg, c1v, c2v, hv, tv);
    const double sat_c2 = c2v / (1.0 + c2v);
    const double f_eps_c2 = c2v / (1.0 + reg.eps * c2v);

    // Explicit transport + nonnegative sources, then Patankar sinks: every
    // contribution to the numerator is nonnegative and the denominator is
    // >= 1, so positivity survives by construction.
    const double c1_gather =
        c1v * keep + dt * ws.inflow[i] + dt * (al2 * f_eps_c2 + p.beta * c1v);
    s.c1[i] = c1_gather / (1.0 + dt * rate.c1);
    s.c2[i] = (c2v + dt * al1 * c1v) / (1.0 + dt * rate.c2);
    s.h[i] = (hv + dt * sat_c2) / (1.0 + dt * rate.h);
    s.tau[i] = (tv + dt * sat_c2) / (1.0 + dt * rate.tau);
  }

  diffuse(s.c1, p.a1, dt, ws.tri_cp, ws.tri_r);
  diffuse(s.c2, p.a2, dt, ws.tri_cp, ws.tri_r);
  diffuse(s.h, reg.eps, dt, ws.tri_cp, ws.tri_r);
  diffuse(s.tau, reg.eps, dt, ws.tri_cp, ws.tri_r);

  s.t += dt;

  for (const Field* f : {&s.c1, &s.c2, &s.h, &s.tau}) {
    for (double x : f->v) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::logic_error("step: scheme produced an invalid state");
      }
    }
  }
}

State step(const ModelParams& p, const Regularization& reg, const State& s,
           double dt) {
  s.validate();
  reg.validate(s.grid().dim);
  State out = s;
  StepWorkspace ws(s.grid());
  step_in_place(p, reg, out, dt, ws);
  return out;
}

namespace {

struct ReportScratch {
  bool ledger_violated = false;
};

MonitorReport evaluate_report(const ModelParams& p, const Regularization& reg,
                              const State& s, const MonitorConfig& cfg,
                              double t_end, MonitorState& ms,
                              ReportScratch& scratch) {
  MonitorReport r;
  r.t = s.t;
  r.mass_c1 = integrate(s.c1);
  r.mass_c2 = integrate(s.c2);
  r.max_h = field_max(s.h);
  r.max_tau = field_max(s.tau);
  r.barrier_h = ms.barrier_h;
  r.barrier_tau = ms.barrier_tau;
  r.dissipation_integral = ms.dissipation_integral;
  r.c2_sq_integral = ms.c2_sq_integral;
  r.ledger_residual = ms.max_ledger_residual;
  r.grad_h_sq = integrate_grad_sq(s.h);
  r.grad_tau_sq = integrate_grad_sq(s.tau);

  bool engaged = ms.floor_engaged;

  if (cfg.check_ledger) r.ok_ledger = !scratch.ledger_violated;

  if (cfg.check_gronwall) {
    const double mass = r.mass_c1 + r.mass_c2;
    r.ok_gronwall =
        mass <= ms.m0 * std::exp(p.beta * s.t) * (1.0 + cfg.gronwall_slack);
  }

  if (cfg.check_barriers) {
    r.ok_barrier_h = r.max_h <= ms.barrier_h * (1.0 + cfg.barrier_slack);
    r.ok_barrier_tau = r.max_tau <= ms.barrier_tau * (1.0 + cfg.barrier_slack);
  }

  if (cfg.check_entropy) {
    bool fe = false;
    r.entropy_F = entropy_functional(p, s, ms.barrier_h, cfg.floor, &fe);
    engaged = engaged || fe;
    fe = false;
    r.dissipation_D = dissipation_rate(p, reg, s, cfg.floor, &fe);
    engaged = engaged || fe;
    r.ok_entropy = std::isfinite(r.entropy_F) && r.entropy_F >= 0.0 &&
                   std::isfinite(r.dissipation_D) && r.dissipation_D >= 0.0;
    r.ok_dissipation_monotone =
        ms.dissipation_integral >= ms.prev_dissipation_integral &&
        std::isfinite(ms.dissipation_integral);
    ms.prev_dissipation_integral = ms.dissipation_integral;

    if (cfg.soft_entropy_cap) {
      const double eta = entropy_cap_eta(p);
      const double fit_end = cfg.cap_fit_fraction * t_end;
      if (s.t <= fit_end * (1.0 + 1e-12)) {
        ms.c16 = std::max(
            ms.c16, entropy_cap_invert(ms.entropy_F0, eta, s.t, r.entropy_F));
      } else {
        ms.c16_fitted = true;
        const double cap = entropy_cap_value(ms.entropy_F0, ms.c16, eta, s.t);
        r.ok_entropy_cap =
            r.entropy_F <= cap * (1.0 + cfg.cap_overshoot) + 1e-12;
      }
    }
  }

  r.ok_c2sq_monotone = ms.c2_sq_integral >= ms.prev_c2_sq_integral &&
                       std::isfinite(ms.c2_sq_integral);
  ms.prev_c2_sq_integral = ms.c2_sq_integral;

  if (cfg.check_gradient_l2) {
    bool fe = false;
    const double qh = integrate_grad_sq_over(s.h, cfg.floor, nullptr, &fe);
    engaged = engaged || fe;
    fe = false;
    const double qt = integrate_grad_sq_over(s.tau, cfg.floor, nullptr, &fe);
    engaged = engaged || fe;
    r.ok_gradient_l2 =
        r.grad_h_sq <= ms.barrier_h * qh * (1.0 + cfg.barrier_slack) &&
        r.grad_tau_sq <= ms.barrier_tau * qt * (1.0 + cfg.barrier_slack);
  }

  r.floor_engaged = engaged;

  // Window state resets: the next report collects fresh per-step extrema.
  ms.max_ledger_residual = 0.0;
  ms.floor_engaged = false;
  scratch.ledger_violated = false;
  return r;
}

} // namespace

RunResult run(const ModelParams& p, const Regularization& reg, const State& s0,
              const RunOptions& opt, const MonitorState* resume) {
  opt.control.validate();
  opt.monitors.validate();
  s0.validate();
  reg.validate(s0.grid().dim);
  p.validate();
  if (!(opt.save_cadence >= 0.0) || !std::isfinite(opt.save_cadence)) {
    throw std::invalid_argument("run: save_cadence must be nonnegative and finite");
  }

  RunResult out;
  out.trajectory.eps = reg.eps;
  State s = s0;
  const double T = opt.control.t_end;
  const MonitorConfig& mc = opt.monitors;

  MonitorState ms;
  if (resume) {
    ms = *resume;
  } else {
    ms.m0 = integrate(s.c1) + integrate(s.c2);
    ms.barrier_h = 1.0 / p.mu + field_max(s.h);
    ms.barrier_tau = 1.0 / p.sigma + field_max(s.tau);
    if (mc.check_entropy) {
      ms.entropy_F0 = entropy_functional(p, s, ms.barrier_h, mc.floor);
    }
  }

  if (T <= s.t) {
    out.final_state = std::move(s);
    out.monitor_state = ms;
    return out;
  }

  const bool saving = opt.save_cadence > 0.0;
  auto report_tick = [&](std::int64_t k) {
    return std::min(static_cast<double>(k) * mc.cadence, T);
  };
  auto save_tick = [&](std::int64_t k) {
    return std::min(static_cast<double>(k) * opt.save_cadence, T);
  };

  ReportScratch scratch;
  StepWorkspace ws(s.grid());

  if (!resume) {
    while (report_tick(ms.k_report) <= s.t) ++ms.k_report;
    if (saving) {
      while (save_tick(ms.k_save) <= s.t) ++ms.k_save;
      out.trajectory.times.push_back(s.t);
      out.trajectory.frames.push_back(s);
    }
    out.reports.push_back(evaluate_report(p, reg, s, mc, T, ms, scratch));
    if (opt.on_report) opt.on_report(out.reports.back(), s, ms);
    if (!out.reports.back().hard_ok()) {
      out.hard_failure = true;
      if (mc.abort_on_hard_failure) {
        out.final_state = std::move(s);
        out.monitor_state = ms;
        return out;
      }
    }
  }

  double mass_cached = integrate(s.c1) + integrate(s.c2);

  while (s.t < T) {
    const double tr = report_tick(ms.k_report);
    const double tsv = saving ? save_tick(ms.k_save)
                              : std::numeric_limits<double>::infinity();
    double next_stop = std::min({tr, tsv, T});
    // The two tick lattices can round to values a few ulp apart at a common
    // multiple; coalesce such collisions into one stop so no degenerate
    // roundoff-sized step is ever taken (cadences this close to machine
    // precision are not meaningful).
    const double coalesce =
        4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, next_stop);
    const bool take_report = tr - next_stop <= coalesce;
    const bool take_save = saving && tsv - next_stop <= coalesce;
    if (take_report) next_stop = std::max(next_stop, tr);
    if (take_save) next_stop = std::max(next_stop, tsv);
    const double gap = next_stop - s.t;
    if (!(gap > 0.0)) throw std::logic_error("run: tick lattice is not advancing");

    const double sd = stable_dt(p, reg, s, opt.control);
    const bool hit = gap <= sd * (1.0 + 1e-9);
    const double dt = hit ? gap : sd;

    const double rhs_before = mc.check_ledger ? ledger_rhs(p, reg, s) : 0.0;
    double d_before = 0.0;
    if (mc.check_entropy) {
      bool fe = false;
      d_before = dissipation_rate(p, reg, s, mc.floor, &fe);
      ms.floor_engaged = ms.floor_engaged || fe;
    }
    double c2sq_before = 0.0;
    {
      Field& sq = ws.scratch_a;
      for (std::size_t i = 0; i < sq.v.size(); ++i) sq[i] = s.c2[i] * s.c2[i];
      c2sq_before = integrate(sq);
    }

    step_in_place(p, reg, s, dt, ws);
    if (hit) s.t = next_stop;

    ms.dissipation_integral += dt * d_before;
    ms.c2_sq_integral += dt * c2sq_before;

    const double mass_after = integrate(s.c1) + integrate(s.c2);
    if (mc.check_ledger) {
      const double res = ledger_residual(mass_cached, mass_after, dt, rhs_before);
      ms.max_ledger_residual = std::max(ms.max_ledger_residual, std::abs(res));
      const double tol =
          mc.ledger_tolerance_factor * dt * dt * std::max(1.0, mass_cached);
      if (!(std::abs(res) <= tol)) scratch.ledger_violated = true;
    }
    mass_cached = mass_after;

    if (hit && take_save) {
      out.trajectory.times.push_back(s.t);
      out.trajectory.frames.push_back(s);
      ++ms.k_save;
    }
    if (hit && take_report) {
      out.reports.push_back(evaluate_report(p, reg, s, mc, T, ms, scratch));
      ++ms.k_report;
      if (opt.on_report) opt.on_report(out.reports.back(), s, ms);
      if (!out.reports.back().hard_ok()) {
        out.hard_failure = true;
        if (mc.abort_on_hard_failure) break;
      }
    }
  }

  out.final_state = std::move(s);
  out.monitor_state = ms;
  return out;
}

} // namespace haptofv
