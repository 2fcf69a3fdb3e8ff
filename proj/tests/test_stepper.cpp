#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "haptofv/stepper.hpp"
#include "ode_reference.hpp"

using namespace haptofv;

namespace {

State uniform_state(const Grid& g, double c1, double c2, double h, double tau) {
  State s(g);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    s.c1[i] = c1;
    s.c2[i] = c2;
    s.h[i] = h;
    s.tau[i] = tau;
  }
  return s;
}

// Rate constants small enough that no reaction bound ever binds.
ModelParams inert_params() {
  ModelParams p;
  p.a1 = 1e-12;
  p.a2 = 1e-12;
  p.b_h = 0.0;
  p.b_tau = 0.0;
  p.beta = 1e-12;
  p.gamma1 = 1e-12;
  p.gamma2 = 1e-12;
  p.delta = 1e-12;
  p.mu = 1e-12;
  p.sigma = 1e-12;
  p.alpha1 = TransitionFn::constant(1e-12);
  p.alpha2 = TransitionFn::constant(1e-12);
  return p;
}

void march(const ModelParams& p, const Regularization& reg, State& s, double dt,
           int steps) {
  StepWorkspace ws(s.grid());
  for (int i = 0; i < steps; ++i) step_in_place(p, reg, s, dt, ws);
}

double spread(const Field& u) { return field_max(u) - field_min(u); }

} // namespace

TEST_SUITE("stepper") {

TEST_CASE("stable_dt returns cfl times dt_max when nothing binds") {
  const Grid g = Grid::line(16, 1.0);
  const State s = uniform_state(g, 0.3, 0.2, 0.4, 0.3); // uniform: zero velocities
  const ModelParams p; // default rates: reaction bound ~ 1, far above dt_max
  const Regularization reg{0.05, 4};
  StepControl ctl;
  ctl.dt_max = 1e-3;
  ctl.cfl_safety = 0.45;
  CHECK(stable_dt(p, reg, s, ctl) == 0.45 * 1e-3);
  ctl.cfl_safety = 1.0;
  CHECK(stable_dt(p, reg, s, ctl) == 1e-3);
}

TEST_CASE("stable_dt advective bound for a linear cue") {
  // h = 2x exactly on cell centers: every interior face velocity is b_h*2 = 2.
  const Grid g = Grid::line(64, 1.0);
  State s = uniform_state(g, 0.1, 0.05, 0.0, 0.2);
  for (int i = 0; i < g.nx; ++i) s.h[g.index(i, 0)] = 2.0 * g.x_center(i);
  ModelParams p = inert_params();
  p.b_h = 1.0;
  const Regularization reg{0.0, 4};
  StepControl ctl;
  ctl.dt_max = 10.0;
  ctl.cfl_safety = 1.0;
  const double hx = g.hx();
  const double dt = stable_dt(p, reg, s, ctl);
  CHECK(dt <= hx / 2.0);
  CHECK(dt > 0.999 * hx / 2.0);
  ctl.cfl_safety = 0.5;
  const double dt_half = stable_dt(p, reg, s, ctl);
  CHECK(dt_half <= 0.5 * hx / 2.0);
  CHECK(dt_half > 0.999 * 0.5 * hx / 2.0);
}

TEST_CASE("stable_dt rejects non-finite states") {
  const Grid g = Grid::line(8, 1.0);
  State s = uniform_state(g, 0.1, 0.1, 0.2, 0.2);
  s.c1[3] = std::numeric_limits<double>::quiet_NaN();
  const ModelParams p;
  const Regularization reg{0.05, 4};
  const StepControl ctl;
  CHECK_THROWS_AS(stable_dt(p, reg, s, ctl), std::invalid_argument);
}

TEST_CASE("step validates dt and workspace") {
  const Grid g = Grid::line(8, 1.0);
  const State s = uniform_state(g, 0.1, 0.1, 0.2, 0.2);
  const ModelParams p;
  const Regularization reg{0.05, 4};
  CHECK_THROWS_AS(step(p, reg, s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(p, reg, s, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  State sm = s;
  StepWorkspace ws_other(Grid::line(12, 1.0));
  CHECK_THROWS_AS(step_in_place(p, reg, sm, 1e-3, ws_other), std::invalid_argument);
}

TEST_CASE("step rejects dt above the transport stability bound") {
  const Grid g = Grid::line(64, 1.0);
  State s = uniform_state(g, 0.1, 0.05, 0.0, 0.2);
  for (int i = 0; i < g.nx; ++i) s.h[g.index(i, 0)] = 2.0 * g.x_center(i);
  ModelParams p = inert_params();
  p.b_h = 1.0;
  const Regularization reg{0.0, 4};
  const double dt_bad = 3.0 * g.hx() / 2.0; // outflow rate * dt = 3
  CHECK_THROWS_AS(step(p, reg, s, dt_bad), std::invalid_argument);
}

TEST_CASE("zero state is a fixed point") {
  const Grid g = Grid::line(8, 1.0);
  const State z(g, 0.0);
  const ModelParams p;
  const Regularization reg{0.05, 4};
  const State out = step(p, reg, z, 1e-3);
  for (const Field* f : {&out.c1, &out.c2, &out.h, &out.tau}) {
    for (std::size_t i = 0; i < f->size(); ++i) CHECK((*f)[i] == 0.0);
  }
  CHECK(out.t == 1e-3);
}

TEST_CASE("uniform states stay uniform and track the reaction system") {
  const Grid g = Grid::line(4, 1.0);
  const ModelParams p;
  const Regularization reg{0.05, 4};

  oracle::Params op;
  op.beta = p.beta;
  op.gamma1 = p.gamma1;
  op.gamma2 = p.gamma2;
  op.delta = p.delta;
  op.mu = p.mu;
  op.sigma = p.sigma;
  op.alpha1_a = p.alpha1.a;
  op.alpha1_b = p.alpha1.b;
  op.alpha2_a = p.alpha2.a;
  op.alpha2_b = p.alpha2.b;
  op.eps = reg.eps;
  op.theta = reg.theta;

  const oracle::Y y0 = {0.3, 0.2, 0.4, 0.3};
  const oracle::Y yT = oracle::integrate(op, y0, 0.0, 1.0, 1e-10);

  auto max_error_at = [&](double dt, int steps) {
    State s = uniform_state(g, y0[0], y0[1], y0[2], y0[3]);
    march(p, reg, s, dt, steps);
    const Field* fields[4] = {&s.c1, &s.c2, &s.h, &s.tau};
    double err = 0.0;
    for (int k = 0; k < 4; ++k) {
      CHECK(spread(*fields[k]) <= 1e-13 * (std::abs(yT[k]) + 1.0));
      for (std::size_t i = 0; i < fields[k]->size(); ++i) {
        err = std::max(err, std::abs((*fields[k])[i] - yT[k]));
      }
    }
    return err;
  };

  const double e1 = max_error_at(1e-3, 1000);
  const double e2 = max_error_at(5e-4, 2000);
  CHECK(e1 <= 5.0 * 1e-3);
  CHECK(e2 <= 5.0 * 5e-4);
  REQUIRE(e2 > 0.0);
  const double order = std::log(e1 / e2) / std::log(2.0);
  CHECK(order >= 0.9);
}

TEST_CASE("implicit diffusion conserves cell-density mass per step") {
  ModelParams p = inert_params();
  p.a1 = 0.02;
  p.a2 = 0.013;
  p.beta = 0.0;
  p.alpha1 = TransitionFn::constant(0.0);
  p.alpha2 = TransitionFn::constant(0.0);
  const Regularization reg{0.0, 4};

  SUBCASE("1d") {
    const Grid g = Grid::line(128, 1.0);
    State s(g, 0.0);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x_center(i);
      s.c1[i] = std::exp(-(x - 0.4) * (x - 0.4) / (2.0 * 0.05 * 0.05));
      s.c2[i] = 0.3 + 0.2 * std::cos(2.0 * 3.14159265358979323846 * x);
      s.h[i] = 0.5;
      s.tau[i] = 0.5;
    }
    StepWorkspace ws(g);
    for (int k = 0; k < 25; ++k) {
      const double m1 = integrate(s.c1);
      const double m2 = integrate(s.c2);
      step_in_place(p, reg, s, 1e-3, ws);
      CHECK(std::abs(integrate(s.c1) - m1) <= 1e-12 * m1);
      CHECK(std::abs(integrate(s.c2) - m2) <= 1e-12 * m2);
    }
  }

  SUBCASE("2d") {
    const Grid g = Grid::rect(24, 16, 1.0, 0.75);
    State s(g, 0.0);
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x_center(ix), y = g.y_center(iy);
        const std::size_t i = g.index(ix, iy);
        s.c1[i] = std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.3) * (y - 0.3)) / 0.02);
        s.c2[i] = 0.2 + 0.1 * std::cos(3.14159265358979323846 * x / g.lx);
        s.h[i] = 0.4;
        s.tau[i] = 0.4;
      }
    }
    StepWorkspace ws(g);
    for (int k = 0; k < 10; ++k) {
      const double m1 = integrate(s.c1);
      const double m2 = integrate(s.c2);
      step_in_place(p, reg, s, 2e-3, ws);
      CHECK(std::abs(integrate(s.c1) - m1) <= 1e-12 * m1);
      CHECK(std::abs(integrate(s.c2) - m2) <= 1e-12 * m2);
    }
  }
}

TEST_CASE("run with t_end at the start time returns the state unchanged") {
  const Grid g = Grid::line(16, 1.0);
  const State s = uniform_state(g, 0.2, 0.1, 0.5, 0.4);
  const ModelParams p;
  const Regularization reg{0.05, 4};
  RunOptions opt;
  opt.control.t_end = 0.0;
  opt.save_cadence = 0.01;
  const RunResult r = run(p, reg, s, opt);
  CHECK(r.reports.empty());
  CHECK(r.trajectory.frames.empty());
  CHECK_FALSE(r.hard_failure);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    CHECK(r.final_state.c1[i] == s.c1[i]);
    CHECK(r.final_state.c2[i] == s.c2[i]);
    CHECK(r.final_state.h[i] == s.h[i]);
    CHECK(r.final_state.tau[i] == s.tau[i]);
  }
}

TEST_CASE("run reproduces pure exponential cue decay") {
  const Grid g = Grid::line(32, 1.0);
  const State s0 = uniform_state(g, 0.0, 0.0, 0.8, 0.6);
  const ModelParams p; // mu = 0.6, sigma = 0.5
  const Regularization reg{0.0, 4};
  RunOptions opt;
  opt.control.dt_max = 1e-3;
  opt.control.cfl_safety = 1.0;
  opt.control.t_end = 1.0;
  const RunResult r = run(p, reg, s0, opt);

  CHECK_FALSE(r.hard_failure);
  CHECK(r.reports.size() == 101); // t = 0, 0.01, ..., 1.0
  CHECK(r.reports.back().t == 1.0);
  for (const auto& rep : r.reports) CHECK(rep.hard_ok());
  for (std::size_t k = 1; k < r.reports.size(); ++k) {
    CHECK(r.reports[k].max_h < r.reports[k - 1].max_h);
    CHECK(r.reports[k].max_tau < r.reports[k - 1].max_tau);
  }

  const double h_exact = 0.8 * std::exp(-p.mu * 1.0);
  const double tau_exact = 0.6 * std::exp(-p.sigma * 1.0);
  for (std::size_t i = 0; i < g.cells(); ++i) {
    CHECK(std::abs(r.final_state.h[i] - h_exact) < 1e-3 * h_exact);
    CHECK(std::abs(r.final_state.tau[i] - tau_exact) < 1e-3 * tau_exact);
    CHECK(r.final_state.c1[i] == 0.0);
    CHECK(r.final_state.c2[i] == 0.0);
  }
}

TEST_CASE("report and save ticks land on the exact lattice") {
  const Grid g = Grid::line(16, 1.0);
  State s0(g, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x_center(i);
    s0.c1[i] = 0.2 + 0.1 * std::cos(3.14159265358979323846 * x);
    s0.c2[i] = 0.1;
    s0.h[i] = 0.5 + 0.2 * std::cos(3.14159265358979323846 * x);
    s0.tau[i] = 0.4 + 0.1 * std::cos(2.0 * 3.14159265358979323846 * x);
  }
  const ModelParams p;
  const Regularization reg{0.05, 4};
  RunOptions opt;
  opt.control.dt_max = 1e-3;
  opt.control.cfl_safety = 1.0;
  opt.control.t_end = 0.078125; // 10 report ticks of 2^-7
  opt.monitors.cadence = 0.0078125;
  opt.save_cadence = 0.015625; // 5 save ticks of 2^-6
  const RunResult r = run(p, reg, s0, opt);

  CHECK_FALSE(r.hard_failure);
  REQUIRE(r.reports.size() == 11);
  for (std::size_t k = 0; k < r.reports.size(); ++k) {
    CHECK(r.reports[k].t == static_cast<double>(k) * 0.0078125);
    CHECK(r.reports[k].hard_ok());
  }
  REQUIRE(r.trajectory.times.size() == 6);
  REQUIRE(r.trajectory.frames.size() == 6);
  for (std::size_t k = 0; k < r.trajectory.times.size(); ++k) {
    CHECK(r.trajectory.times[k] == static_cast<double>(k) * 0.015625);
    CHECK(r.trajectory.frames[k].t == r.trajectory.times[k]);
  }
}

TEST_CASE("resumed runs continue the original run bit-exactly") {
  const Grid g = Grid::line(24, 1.0);
  State s0(g, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x_center(i);
    s0.c1[i] = 0.3 + 0.2 * std::cos(3.14159265358979323846 * x);
    s0.c2[i] = 0.05;
    s0.h[i] = 0.4 + 0.3 * std::cos(3.14159265358979323846 * x);
    s0.tau[i] = 0.3 + 0.1 * std::cos(2.0 * 3.14159265358979323846 * x);
  }
  const ModelParams p;
  const Regularization reg{0.05, 4};

  RunOptions full;
  full.control.dt_max = 1e-3;
  full.control.cfl_safety = 0.9;
  full.control.t_end = 0.2;
  full.monitors.cadence = 0.01;
  full.save_cadence = 0.025;
  const RunResult whole = run(p, reg, s0, full);
  REQUIRE_FALSE(whole.hard_failure);

  RunOptions first_half = full;
  first_half.control.t_end = 0.1;
  const RunResult a = run(p, reg, s0, first_half);
  const RunResult b = run(p, reg, a.final_state, full, &a.monitor_state);

  REQUIRE(a.reports.size() + b.reports.size() == whole.reports.size());
  for (std::size_t k = 0; k < whole.reports.size(); ++k) {
    const MonitorReport& w = whole.reports[k];
    const MonitorReport& r2 =
        k < a.reports.size() ? a.reports[k] : b.reports[k - a.reports.size()];
    CHECK(r2.t == w.t);
    CHECK(r2.mass_c1 == w.mass_c1);
    CHECK(r2.mass_c2 == w.mass_c2);
    CHECK(r2.max_h == w.max_h);
    CHECK(r2.entropy_F == w.entropy_F);
    CHECK(r2.dissipation_integral == w.dissipation_integral);
    CHECK(r2.ledger_residual == w.ledger_residual);
  }
  REQUIRE(a.trajectory.frames.size() + b.trajectory.frames.size() ==
          whole.trajectory.frames.size());
  for (std::size_t k = 0; k < whole.trajectory.times.size(); ++k) {
    const bool in_a = k < a.trajectory.times.size();
    const double t2 = in_a ? a.trajectory.times[k]
                           : b.trajectory.times[k - a.trajectory.times.size()];
    CHECK(t2 == whole.trajectory.times[k]);
  }
  for (std::size_t i = 0; i < g.cells(); ++i) {
    CHECK(b.final_state.c1[i] == whole.final_state.c1[i]);
    CHECK(b.final_state.c2[i] == whole.final_state.c2[i]);
    CHECK(b.final_state.h[i] == whole.final_state.h[i]);
    CHECK(b.final_state.tau[i] == whole.final_state.tau[i]);
  }
  CHECK(b.monitor_state.dissipation_integral == whole.monitor_state.dissipation_integral);
  CHECK(b.monitor_state.c2_sq_integral == whole.monitor_state.c2_sq_integral);
}

TEST_CASE("random parameters and data never produce a negative cell") {
  std::mt19937_64 rng(20260817);
  std::uniform_real_distribution<double> ur(0.01, 1.2);
  std::uniform_real_distribution<double> uc(0.0, 1.2);
  std::uniform_real_distribution<double> ucue(0.01, 1.0);
  const double eps_choices[3] = {0.0, 0.05, 0.3};

  for (int trial = 0; trial < 8; ++trial) {
    const Grid g = trial < 6 ? Grid::line(48, 1.0) : Grid::rect(12, 10, 1.0, 0.8);
    ModelParams p;
    p.a1 = ur(rng);
    p.a2 = ur(rng);
    p.b_h = ur(rng);
    p.b_tau = ur(rng);
    p.beta = ur(rng);
    p.gamma1 = ur(rng);
    p.gamma2 = ur(rng);
    p.delta = ur(rng);
    p.mu = ur(rng);
    p.sigma = ur(rng);
    p.alpha1 = TransitionFn::saturating(0.01 + 0.6 * uc(rng) / 1.2, 0.5 * uc(rng) / 1.2);
    p.alpha2 = TransitionFn::saturating(0.01 + 0.6 * uc(rng) / 1.2, 0.5 * uc(rng) / 1.2);
    const Regularization reg{eps_choices[trial % 3], 4};

    State s(g, 0.0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
      s.c1[i] = uc(rng);
      s.c2[i] = uc(rng);
      s.h[i] = ucue(rng);
      s.tau[i] = ucue(rng);
    }

    StepControl ctl;
    ctl.dt_max = 5e-3;
    ctl.cfl_safety = 0.9;
    StepWorkspace ws(g);
    for (int k = 0; k < 60; ++k) {
      const double dt = stable_dt(p, reg, s, ctl);
      REQUIRE(dt > 0.0);
      step_in_place(p, reg, s, dt, ws);
      CHECK(field_nonnegative(s.c1));
      CHECK(field_nonnegative(s.c2));
      CHECK(field_nonnegative(s.h));
      CHECK(field_nonnegative(s.tau));
    }
  }
}

} // TEST_SUITE
