#include "haptofv/analysis.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "haptofv/numerics.hpp"

namespace haptofv {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double time_bump(double t, double T, int q) {
  const double s = 1.0 - t / T;
  if (s <= 0.0) return 0.0;
  return std::pow(s, q);
}

double time_bump_dt(double t, double T, int q) {
  const double s = 1.0 - t / T;
  if (s <= 0.0) return 0.0;
  return -static_cast<double>(q) / T * std::pow(s, q - 1);
}

} // namespace

TestFunction TestFunction::cosine(int kx, int ky, int q, double amp) {
  TestFunction f;
  f.terms.push_back(TestFunctionTerm{amp, kx, ky, q});
  return f;
}

double TestFunction::value(const Grid& g, double x, double y, double t,
                           double T) const {
  double out = 0.0;
  for (const auto& tm : terms) {
    double v = tm.amp * std::cos(tm.kx * kPi * x / g.lx) * time_bump(t, T, tm.q);
    if (g.dim == 2) v *= std::cos(tm.ky * kPi * y / g.ly);
    out += v;
  }
  return out;
}

double TestFunction::dt_value(const Grid& g, double x, double y, double t,
                              double T) const {
  double out = 0.0;
  for (const auto& tm : terms) {
    double v = tm.amp * std::cos(tm.kx * kPi * x / g.lx) * time_bump_dt(t, T, tm.q);
    if (g.dim == 2) v *= std::cos(tm.ky * kPi * y / g.ly);
    out += v;
  }
  return out;
}

double TestFunction::grad_x(const Grid& g, double x, double y, double t,
                            double T) const {
  double out = 0.0;
  for (const auto& tm : terms) {
    const double wx = tm.kx * kPi / g.lx;
    double v = -tm.amp * wx * std::sin(wx * x) * time_bump(t, T, tm.q);
    if (g.dim == 2) v *= std::cos(tm.ky * kPi * y / g.ly);
    out += v;
  }
  return out;
}

double TestFunction::grad_y(const Grid& g, double x, double y, double t,
                            double T) const {
  if (g.dim != 2) return 0.0;
  double out = 0.0;
  for (const auto& tm : terms) {
    const double wy = tm.ky * kPi / g.ly;
    out += -tm.amp * wy * std::cos(tm.kx * kPi * x / g.lx) * std::sin(wy * y) *
           time_bump(t, T, tm.q);
  }
  return out;
}

namespace {

double alpha_raw(const TransitionFn& fn, double z) {
  if (fn.form == TransitionFn::Form::constant) return fn.a;
  return fn.a + fn.b * z / (1.0 + z);
}

// Cell-midpoint quadrature of f(i) * phi(x_i, t).
template <typename PerCell>
double cell_quadrature(const Grid& g, PerCell f) {
  double sum = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.dim == 2 ? g.y_center(iy) : 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
      sum += f(g.index(ix, iy), g.x_center(ix), y);
    }
  }
  return sum * g.cell_volume();
}

// Interior-face quadrature of (face gradient of u) dot (grad phi at the face
// center), optionally weighted by the face average of w.
double grad_pairing(const Grid& g, const Field& u, const Field* w,
                    const TestFunction& phi, double t, double T) {
  double sum = 0.0;
  const double hx = g.hx(), hy = g.hy();
  const double xvol = g.dim == 1 ? hx : hx * hy;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.dim == 2 ? g.y_center(iy) : 0.0;
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      const double gu = (u[l + 1] - u[l]) / hx;
      const double xf = (ixf + 1) * hx;
      double term = gu * phi.grad_x(g, xf, y, t, T);
      if (w) term *= 0.5 * ((*w)[l] + (*w)[l + 1]);
      sum += term * xvol;
    }
  }
  if (g.dim == 2) {
    const double yvol = hx * hy;
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      const double yf = (iyf + 1) * hy;
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        const double gu = (u[l + g.nx] - u[l]) / hy;
        double term = gu * phi.grad_y(g, g.x_center(ix), yf, t, T);
        if (w) term *= 0.5 * ((*w)[l] + (*w)[l + g.nx]);
        sum += term * yvol;
      }
    }
  }
  return sum;
}

} // namespace

double weak_residual(const Trajectory& traj, const ModelParams& p,
                     const TestFunction& phi, WeakEquation eq,
                     const WeakOptions& opt) {
  if (traj.times.size() != traj.frames.size() || traj.times.size() < 2) {
    throw std::invalid_argument("weak_residual: trajectory must hold at least two aligned frames");
  }
  const Grid& g = traj.frames.front().grid();
  for (const State& s : traj.frames) {
    if (!(s.grid() == g)) throw std::invalid_argument("weak_residual: trajectory grid mismatch");
  }
  for (const auto& tm : phi.terms) {
    if (tm.q < 2 || tm.kx < 0 || tm.ky < 0) {
      throw std::invalid_argument("weak_residual: test function needs q >= 2 and nonnegative modes");
    }
  }
  const double T = traj.times.back();
  const double e = opt.eps_in_form;

  // Signed integrand of the time integral at one frame: -(u dphi/dt) - RHS(t).
  auto frame_integrand = [&](const State& s, double t) {
    switch (eq) {
      case WeakEquation::c1: {
        const double a_dt = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          return s.c1[i] * phi.dt_value(g, x, y, t, T);
        });
        const double grad_c1 = grad_pairing(g, s.c1, nullptr, phi, t, T);
        const double grad_h = grad_pairing(g, s.h, &s.c1, phi, t, T);
        const double grad_tau = grad_pairing(g, s.tau, &s.c1, phi, t, T);
        const double react = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          const double pv = phi.value(g, x, y, t, T);
          const double c1v = s.c1[i], c2v = s.c2[i], tv = s.tau[i];
          double r = -alpha_raw(p.alpha1, tv) * c1v +
                     alpha_raw(p.alpha2, tv) * (c2v / (1.0 + e * c2v)) +
                     p.beta * c1v * (1.0 - c1v - c2v - tv);
          if (e > 0.0) r -= e * ipow(c1v, opt.theta);
          return r * pv;
        });
        const double rhs = -p.a1 * grad_c1 + p.b_h * grad_h + p.b_tau * grad_tau + react;
        return -a_dt - rhs;
      }
      case WeakEquation::c2: {
        const double a_dt = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          return s.c2[i] * phi.dt_value(g, x, y, t, T);
        });
        const double grad_c2 = grad_pairing(g, s.c2, nullptr, phi, t, T);
        const double react = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          const double pv = phi.value(g, x, y, t, T);
          return (alpha_raw(p.alpha1, s.tau[i]) * s.c1[i] -
                  alpha_raw(p.alpha2, s.tau[i]) * (s.c2[i] / (1.0 + e * s.c2[i]))) *
                 pv;
        });
        return -a_dt - (-p.a2 * grad_c2 + react);
      }
      case WeakEquation::h: {
        const double a_dt = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          return s.h[i] * phi.dt_value(g, x, y, t, T);
        });
        const double grad_h = e > 0.0 ? grad_pairing(g, s.h, nullptr, phi, t, T) : 0.0;
        const double react = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          const double pv = phi.value(g, x, y, t, T);
          return (-p.gamma1 * s.h[i] * s.c1[i] - p.gamma2 * s.h[i] * s.c2[i] -
                  p.mu * s.h[i] + s.c2[i] / (1.0 + s.c2[i])) *
                 pv;
        });
        return -a_dt - (-e * grad_h + react);
      }
      case WeakEquation::tau: {
        const double a_dt = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          return s.tau[i] * phi.dt_value(g, x, y, t, T);
        });
        const double grad_tau = e > 0.0 ? grad_pairing(g, s.tau, nullptr, phi, t, T) : 0.0;
        const double sign = opt.defeq4_sign_corrected ? 1.0 : -1.0;
        const double react = cell_quadrature(g, [&](std::size_t i, double x, double y) {
          const double pv = phi.value(g, x, y, t, T);
          return (-p.delta * s.tau[i] * s.c1[i] - p.sigma * s.tau[i] +
                  sign * s.c2[i] / (1.0 + s.c2[i])) *
                 pv;
        });
        return -a_dt - (-e * grad_tau + react);
      }
    }
    return 0.0;
  };

  double acc = 0.0;
  std::vector<double> vals(traj.times.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    vals[k] = frame_integrand(traj.frames[k], traj.times[k]);
  }
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const double w = traj.times[k + 1] - traj.times[k];
    if (!(w > 0.0)) throw std::invalid_argument("weak_residual: save times must increase");
    acc += 0.5 * w * (vals[k] + vals[k + 1]);
  }

  const State& s0 = traj.frames.front();
  const double t0 = traj.times.front();
  const Field* u0 = nullptr;
  switch (eq) {
    case WeakEquation::c1: u0 = &s0.c1; break;
    case WeakEquation::c2: u0 = &s0.c2; break;
    case WeakEquation::h: u0 = &s0.h; break;
    case WeakEquation::tau: u0 = &s0.tau; break;
  }
  const double init = cell_quadrature(g, [&](std::size_t i, double x, double y) {
    return (*u0)[i] * phi.value(g, x, y, t0, T);
  });

  return acc - init;
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HAPTOFV_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double trajectory_l2_difference(const Trajectory& a, const Trajectory& b, int species) {
  const Grid& g = a.frames.front().grid();
  auto pick = [species](const State& s) -> const Field& {
    switch (species) {
      case 0: return s.c1;
      case 1: return s.c2;
      case 2: return s.h;
      default: return s.tau;
    }
  };
  std::vector<double> sq(a.times.size());
  std::vector<double> cell(g.cells());
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const Field& ua = pick(a.frames[k]);
    const Field& ub = pick(b.frames[k]);
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const double d = ua[i] - ub[i];
      cell[i] = d * d;
    }
    sq[k] = pairwise_sum(cell) * g.cell_volume();
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < a.times.size(); ++k) {
    acc += 0.5 * (a.times[k + 1] - a.times[k]) * (sq[k] + sq[k + 1]);
  }
  return std::sqrt(acc);
}

} // namespace

SweepResult epsilon_sweep(const SweepSetup& setup) {
  if (setup.eps_list.empty()) {
    throw std::invalid_argument("sweep: eps list must be nonempty");
  }
  for (double e : setup.eps_list) Regularization{e, setup.theta}.validate(setup.initial.grid().dim);
  if (!(setup.save_cadence > 0.0)) {
    throw std::invalid_argument("sweep: save cadence must be positive to store trajectories");
  }
  setup.params.validate();

  const std::size_t n = setup.eps_list.size();
  std::vector<Trajectory> trajs(n);
  std::vector<char> hard(n, 0);
  std::vector<std::exception_ptr> errors(n);

  RunOptions opt;
  opt.control = setup.control;
  opt.monitors = setup.monitors;
  opt.save_cadence = setup.save_cadence;

  const int threads = std::min<int>(resolve_threads(setup.threads), static_cast<int>(n));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const Regularization reg{setup.eps_list[i], setup.theta};
        RunResult r = run(setup.params, reg, setup.initial, opt);
        hard[i] = r.hard_failure ? 1 : 0;
        trajs[i] = std::move(r.trajectory);
      } catch (const std::exception& ex) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "sweep member eps=%.17g: ", setup.eps_list[i]);
        errors[i] = std::make_exception_ptr(std::runtime_error(std::string(buf) + ex.what()));
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 1; i < n; ++i) {
    if (trajs[i].times != trajs[0].times) {
      throw std::logic_error("sweep: member runs disagree on save times");
    }
  }

  SweepResult out;
  out.eps_list = setup.eps_list;
  out.member_hard_failure.assign(hard.begin(), hard.end());
  out.pairwise_l2.resize(n >= 2 ? n - 1 : 0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (int sp = 0; sp < 4; ++sp) {
      out.pairwise_l2[j][static_cast<std::size_t>(sp)] =
          trajectory_l2_difference(trajs[j], trajs[j + 1], sp);
    }
  }

  out.weak_residuals_form.resize(n);
  out.weak_residuals_limit.resize(n);
  const WeakEquation eqs[4] = {WeakEquation::c1, WeakEquation::c2, WeakEquation::h,
                               WeakEquation::tau};
  for (std::size_t i = 0; i < n; ++i) {
    WeakOptions form;
    form.eps_in_form = setup.eps_list[i];
    form.theta = setup.theta;
    WeakOptions limit;
    limit.eps_in_form = 0.0;
    limit.theta = setup.theta;
    for (int q = 0; q < 4; ++q) {
      auto& rf = out.weak_residuals_form[i][static_cast<std::size_t>(q)];
      auto& rl = out.weak_residuals_limit[i][static_cast<std::size_t>(q)];
      rf.reserve(setup.test_functions.size());
      rl.reserve(setup.test_functions.size());
      for (const TestFunction& phi : setup.test_functions) {
        rf.push_back(weak_residual(trajs[i], setup.params, phi, eqs[q], form));
        rl.push_back(weak_residual(trajs[i], setup.params, phi, eqs[q], limit));
      }
    }
  }
  return out;
}

ConvergenceResult manufactured_convergence(const ConvergenceSetup& setup) {
  ConvergenceResult out;

  // Pure diffusion of the chondrocyte field: one Neumann cosine mode with a
  // positive offset decays as exp(-a2 (pi/L)^2 t) about the offset.
  {
    ModelParams p;
    p.a1 = 0.0;
    p.a2 = setup.heat_a2;
    p.b_h = p.b_tau = 0.0;
    p.beta = 0.0;
    p.gamma1 = p.gamma2 = 0.0;
    p.delta = 0.0;
    p.mu = 0.0;
    p.sigma = 0.0;
    p.alpha1 = TransitionFn::constant(0.0);
    p.alpha2 = TransitionFn::constant(0.0);
    const Regularization reg{0.0, 4};
    const double lam = (kPi / setup.lx) * (kPi / setup.lx) * setup.heat_a2;

    const int n0 = setup.heat_n_list.front();
    for (int n_cells : setup.heat_n_list) {
      const Grid g = Grid::line(n_cells, setup.lx);
      State s(g, 0.0);
      for (int i = 0; i < n_cells; ++i) {
        s.c2[i] = setup.heat_offset +
                  setup.heat_amplitude * std::cos(kPi * g.x_center(i) / setup.lx);
      }
      const double ratio = static_cast<double>(n0) / n_cells;
      const double dt_target = setup.heat_dt_coarsest * ratio * ratio;
      const long nsteps = std::lround(setup.t_end / dt_target);
      const double dt = setup.t_end / static_cast<double>(nsteps);
      StepWorkspace ws(g);
      for (long k = 0; k < nsteps; ++k) step_in_place(p, reg, s, dt, ws);

      const double decay = std::exp(-lam * setup.t_end);
      std::vector<double> sq(g.cells());
      for (int i = 0; i < n_cells; ++i) {
        const double exact = setup.heat_offset +
                             setup.heat_amplitude * decay *
                                 std::cos(kPi * g.x_center(i) / setup.lx);
        const double d = s.c2[i] - exact;
        sq[static_cast<std::size_t>(i)] = d * d;
      }
      out.heat_n.push_back(n_cells);
      out.heat_l2_error.push_back(std::sqrt(pairwise_sum(sq) * g.cell_volume()));
    }
    for (std::size_t j = 0; j + 1 < out.heat_l2_error.size(); ++j) {
      const double rate = std::log(out.heat_l2_error[j] / out.heat_l2_error[j + 1]) /
                          std::log(static_cast<double>(out.heat_n[j + 1]) /
                                   static_cast<double>(out.heat_n[j]));
      out.heat_order.push_back(rate);
    }
  }

  // Pure exponential decay of the cue fields (no cells, no sources).
  {
    ModelParams p;
    p.a1 = p.a2 = 0.0;
    p.b_h = p.b_tau = 0.0;
    p.beta = 0.0;
    p.gamma1 = p.gamma2 = 0.0;
    p.delta = 0.0;
    p.mu = setup.decay_mu;
    p.sigma = setup.decay_sigma;
    p.alpha1 = TransitionFn::constant(0.0);
    p.alpha2 = TransitionFn::constant(0.0);
    const Regularization reg{0.0, 4};
    const Grid g = Grid::line(setup.decay_n, setup.lx);
    State s(g, 0.0);
    const double h0 = 0.8, tau0 = 0.6;
    for (auto& v : s.h.v) v = h0;
    for (auto& v : s.tau.v) v = tau0;
    const long nsteps = std::lround(setup.t_end / setup.decay_dt);
    const double dt = setup.t_end / static_cast<double>(nsteps);
    StepWorkspace ws(g);
    for (long k = 0; k < nsteps; ++k) step_in_place(p, reg, s, dt, ws);
    const double h_exact = h0 * std::exp(-setup.decay_mu * setup.t_end);
    const double tau_exact = tau0 * std::exp(-setup.decay_sigma * setup.t_end);
    double h_err = 0.0, tau_err = 0.0;
    for (const double v : s.h.v) h_err = std::max(h_err, std::abs(v - h_exact));
    for (const double v : s.tau.v) tau_err = std::max(tau_err, std::abs(v - tau_exact));
    out.decay_h_rel_error = h_err / h_exact;
    out.decay_tau_rel_error = tau_err / tau_exact;
  }

  // Spatially constant data under the full default model: the scheme must
  // keep every field exactly uniform, whatever the reaction dynamics do.
  {
    const ModelParams p; // defaults
    const Regularization reg{0.05, 4};
    const Grid g = Grid::line(setup.const_n, setup.lx);
    State s(g, 0.0);
    for (auto& v : s.c1.v) v = 0.2;
    for (auto& v : s.c2.v) v = 0.1;
    for (auto& v : s.h.v) v = 0.5;
    for (auto& v : s.tau.v) v = 0.3;
    const long nsteps = std::lround(setup.t_end / setup.const_dt);
    const double dt = setup.t_end / static_cast<double>(nsteps);
    StepWorkspace ws(g);
    for (long k = 0; k < nsteps; ++k) step_in_place(p, reg, s, dt, ws);
    double spread = 0.0;
    for (const Field* f : {&s.c1, &s.c2, &s.h, &s.tau}) {
      spread = std::max(spread, field_max(*f) - field_min(*f));
    }
    out.const_max_error = spread;
  }

  return out;
}

} // namespace haptofv
