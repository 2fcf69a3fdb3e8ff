#include "haptofv/cli.hpp"

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haptofv/analysis.hpp"
#include "haptofv/config.hpp"
#include "haptofv/snapshot.hpp"
#include "haptofv/stepper.hpp"

namespace haptofv {

namespace {

RunConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config("");
  return parse_config_file(path);
}

std::vector<TestFunction> default_test_functions(const Grid& g) {
  const int ky = g.dim == 2 ? 1 : 0;
  std::vector<TestFunction> fns;
  fns.push_back(TestFunction::cosine(0, 0, 2, 1.0));
  fns.push_back(TestFunction::cosine(1, ky, 2, 1.0));
  fns.push_back(TestFunction::cosine(2, ky, 3, 0.5));
  return fns;
}

const char* species_name(int sp) {
  switch (sp) {
    case 0: return "c1";
    case 1: return "c2";
    case 2: return "h";
    default: return "tau";
  }
}

int run_simulate(const RunConfig& cfg) {
  const State s0 = build_initial_state(cfg);
  RunOptions opt;
  opt.control = cfg.control;
  opt.monitors = cfg.monitors;
  opt.save_cadence = cfg.save_cadence;
  if (!cfg.checkpoint_path.empty()) {
    const std::uint64_t hash = config_hash(cfg);
    const std::string path = cfg.checkpoint_path;
    opt.on_report = [hash, path](const MonitorReport&, const State& s,
                                 const MonitorState& ms) {
      Checkpoint c;
      c.config_hash = hash;
      c.state = s;
      c.monitor = ms;
      write_checkpoint(c, path);
    };
  }

  const RunResult r = run(cfg.params, cfg.reg, s0, opt);
  if (!r.reports.empty()) write_series(r.reports, cfg.series_path);
  if (!cfg.snapshot_path.empty()) write_snapshot(r.final_state, cfg.snapshot_path);

  const MonitorReport* last = r.reports.empty() ? nullptr : &r.reports.back();
  std::printf("t = %.17g  mass_c1 = %.17g  mass_c2 = %.17g  max_h = %.17g  max_tau = %.17g\n",
              r.final_state.t, last ? last->mass_c1 : 0.0, last ? last->mass_c2 : 0.0,
              last ? last->max_h : 0.0, last ? last->max_tau : 0.0);
  if (r.hard_failure) {
    if (!cfg.monitors.failure_snapshot_path.empty()) {
      write_snapshot(r.final_state, cfg.monitors.failure_snapshot_path);
      std::fprintf(stderr, "monitor hard-failure; diagnostic snapshot written to %s\n",
                   cfg.monitors.failure_snapshot_path.c_str());
    } else {
      std::fprintf(stderr, "monitor hard-failure\n");
    }
    return 2;
  }
  std::printf("all hard monitor checks passed (%zu reports)\n", r.reports.size());
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  SweepSetup setup;
  setup.params = cfg.params;
  setup.theta = cfg.reg.theta;
  setup.initial = build_initial_state(cfg);
  setup.control = cfg.control;
  setup.monitors = cfg.monitors;
  setup.save_cadence = cfg.save_cadence;
  setup.eps_list = cfg.sweep_eps;
  setup.test_functions = default_test_functions(cfg.grid);
  setup.threads = cfg.sweep_threads;

  const SweepResult res = epsilon_sweep(setup);

  FILE* out = std::fopen(cfg.sweep_csv_path.c_str(), "wb");
  if (!out) {
    std::fprintf(stderr, "cannot open sweep output: %s\n", cfg.sweep_csv_path.c_str());
    return 1;
  }
  std::fprintf(out, "kind,eps_a,eps_b,species_or_eq,phi,value\n");
  for (std::size_t j = 0; j + 1 < res.eps_list.size(); ++j) {
    for (int sp = 0; sp < 4; ++sp) {
      std::fprintf(out, "pairwise_l2,%.17g,%.17g,%s,,%.17g\n", res.eps_list[j],
                   res.eps_list[j + 1], species_name(sp),
                   res.pairwise_l2[j][static_cast<std::size_t>(sp)]);
    }
  }
  for (std::size_t i = 0; i < res.eps_list.size(); ++i) {
    for (int q = 0; q < 4; ++q) {
      const auto& rf = res.weak_residuals_form[i][static_cast<std::size_t>(q)];
      const auto& rl = res.weak_residuals_limit[i][static_cast<std::size_t>(q)];
      for (std::size_t k = 0; k < rf.size(); ++k) {
        std::fprintf(out, "weak_form,%.17g,,%s,%zu,%.17g\n", res.eps_list[i],
                     species_name(q), k, rf[k]);
        std::fprintf(out, "weak_limit,%.17g,,%s,%zu,%.17g\n", res.eps_list[i],
                     species_name(q), k, rl[k]);
      }
    }
  }
  std::fclose(out);

  bool any_hard = false;
  for (std::size_t i = 0; i < res.member_hard_failure.size(); ++i) {
    if (res.member_hard_failure[i]) {
      any_hard = true;
      std::fprintf(stderr, "sweep member eps=%.17g reported a monitor hard-failure\n",
                   res.eps_list[i]);
    }
  }
  std::printf("sweep complete: %zu runs, results in %s\n", res.eps_list.size(),
              cfg.sweep_csv_path.c_str());
  return any_hard ? 2 : 0;
}

int run_convergence(const RunConfig& cfg) {
  ConvergenceSetup setup;
  setup.heat_n_list = cfg.convergence_n;
  const ConvergenceResult res = manufactured_convergence(setup);
  std::printf("diffusion-mode study (c2):\n");
  std::printf("  %8s  %22s  %8s\n", "n", "l2_error", "order");
  for (std::size_t i = 0; i < res.heat_n.size(); ++i) {
    if (i == 0) {
      std::printf("  %8d  %22.15e  %8s\n", res.heat_n[i], res.heat_l2_error[i], "-");
    } else {
      std::printf("  %8d  %22.15e  %8.3f\n", res.heat_n[i], res.heat_l2_error[i],
                  res.heat_order[i - 1]);
    }
  }
  std::printf("cue decay relative errors: h %.3e, tau %.3e\n", res.decay_h_rel_error,
              res.decay_tau_rel_error);
  std::printf("constant-data uniformity drift: %.3e\n", res.const_max_error);
  return 0;
}

int run_weakcheck(const RunConfig& cfg, bool strict_defeq4) {
  const State s0 = build_initial_state(cfg);
  RunOptions opt;
  opt.control = cfg.control;
  opt.monitors = cfg.monitors;
  opt.save_cadence = cfg.save_cadence > 0.0 ? cfg.save_cadence
                                            : cfg.control.t_end / 200.0;
  const RunResult r = run(cfg.params, cfg.reg, s0, opt);

  WeakOptions wopt;
  wopt.eps_in_form = cfg.reg.eps;
  wopt.theta = cfg.reg.theta;
  wopt.defeq4_sign_corrected = strict_defeq4 ? false : cfg.defeq4_sign_corrected;

  const WeakEquation eqs[4] = {WeakEquation::c1, WeakEquation::c2, WeakEquation::h,
                               WeakEquation::tau};
  const std::vector<TestFunction> fns = default_test_functions(cfg.grid);
  std::printf("weak-identity residuals (eps_in_form = %.17g, tau source sign %s):\n",
              wopt.eps_in_form, wopt.defeq4_sign_corrected ? "corrected" : "as-printed");
  for (int q = 0; q < 4; ++q) {
    for (std::size_t k = 0; k < fns.size(); ++k) {
      const double res = weak_residual(r.trajectory, cfg.params, fns[k], eqs[q], wopt);
      std::printf("  eq=%-3s phi=%zu residual=%.17g\n", species_name(q), k, res);
    }
  }
  return r.hard_failure ? 2 : 0;
}

} // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Finite-volume simulator for a regularized double-haptotaxis tissue model"};
  app.require_subcommand(1);

  std::string cfg_simulate, cfg_sweep, cfg_convergence, cfg_weakcheck, cfg_validate;
  bool strict_defeq4 = false;

  CLI::App* sim = app.add_subcommand("simulate", "run one trajectory with monitors");
  sim->add_option("config", cfg_simulate, "config file (defaults when omitted)");
  CLI::App* swp = app.add_subcommand("sweep", "run the regularization sweep");
  swp->add_option("config", cfg_sweep, "config file (defaults when omitted)");
  CLI::App* cnv = app.add_subcommand("convergence", "manufactured-solution study");
  cnv->add_option("config", cfg_convergence, "config file (defaults when omitted)");
  CLI::App* wck = app.add_subcommand("weakcheck", "weak-identity residuals of one run");
  wck->add_option("config", cfg_weakcheck, "config file (defaults when omitted)");
  wck->add_flag("--strict-defeq4", strict_defeq4,
                "evaluate the tau identity with the as-printed source sign");
  CLI::App* val = app.add_subcommand("validate-config", "parse and validate a config");
  val->add_option("config", cfg_validate, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(sim)) return run_simulate(load_config(cfg_simulate));
    if (app.got_subcommand(swp)) return run_sweep(load_config(cfg_sweep));
    if (app.got_subcommand(cnv)) return run_convergence(load_config(cfg_convergence));
    if (app.got_subcommand(wck)) return run_weakcheck(load_config(cfg_weakcheck), strict_defeq4);
    if (app.got_subcommand(val)) {
      const RunConfig cfg = load_config(cfg_validate);
      std::printf("config OK (hash %016llx)\n",
                  static_cast<unsigned long long>(config_hash(cfg)));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

} // namespace haptofv
