#include "haptofv/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "haptofv/operators.hpp"

namespace haptofv {

RunConfig default_config() {
  // Demo problem: one stem-cell colony on a domain several regularization
  // smoothing lengths wide (sqrt(eps*T) stays well below the feature scale
  // for eps <= 0.1, T = 1, so the eps-sweep runs in its perturbative regime).
  RunConfig cfg;
  cfg.grid = Grid::line(256, 4.0);
  cfg.init_c1.kind = InitSpec::Kind::gaussian;
  cfg.init_c1.offset = 0.02;
  cfg.init_c1.amplitude = 0.5;
  cfg.init_c1.width = 0.32;
  cfg.init_c1.center_x = 1.4;
  cfg.init_c1.center_y = 2.0;
  cfg.init_c2.kind = InitSpec::Kind::constant;
  cfg.init_c2.value = 0.05;
  cfg.init_h.kind = InitSpec::Kind::cosine;
  cfg.init_h.offset = 0.3;
  cfg.init_h.amplitude = 0.4;
  cfg.init_h.kx = 1;
  cfg.init_h.ky = 1;
  cfg.init_tau.kind = InitSpec::Kind::cosine;
  cfg.init_tau.offset = 0.25;
  cfg.init_tau.amplitude = 0.3;
  cfg.init_tau.kx = 2;
  cfg.init_tau.ky = 1;
  return cfg;
}

namespace {

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& val, const std::string& key, int line) {
  char* end = nullptr;
  const double d = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0' || !std::isfinite(d)) {
    throw ConfigError("line " + std::to_string(line) + ": invalid number for '" +
                          key + "': " + val,
                      line);
  }
  return d;
}

int parse_int(const std::string& val, const std::string& key, int line) {
  char* end = nullptr;
  const long v = std::strtol(val.c_str(), &end, 10);
  if (end == val.c_str() || *end != '\0') {
    throw ConfigError("line " + std::to_string(line) + ": invalid integer for '" +
                          key + "': " + val,
                      line);
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& val, const std::string& key, int line) {
  if (val == "true" || val == "1" || val == "on" || val == "yes") return true;
  if (val == "false" || val == "0" || val == "off" || val == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": invalid boolean for '" +
                        key + "': " + val,
                    line);
}

std::vector<double> parse_double_list(const std::string& val, const std::string& key,
                                      int line) {
  std::vector<double> out;
  std::stringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key, line));
  }
  if (out.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": empty list for '" + key + "'",
                      line);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& val, const std::string& key,
                                int line) {
  std::vector<int> out;
  std::stringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(item, key, line));
  }
  if (out.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": empty list for '" + key + "'",
                      line);
  }
  return out;
}

bool handle_init_key(InitSpec& s, const std::string& sub, const std::string& key,
                     const std::string& val, int line) {
  if (sub == "kind") {
    if (val == "constant") s.kind = InitSpec::Kind::constant;
    else if (val == "cosine") s.kind = InitSpec::Kind::cosine;
    else if (val == "gaussian") s.kind = InitSpec::Kind::gaussian;
    else
      throw ConfigError("line " + std::to_string(line) + ": unknown initial-data kind '" +
                            val + "' (constant | cosine | gaussian)",
                        line);
  } else if (sub == "value") {
    s.value = parse_double(val, key, line);
  } else if (sub == "offset") {
    s.offset = parse_double(val, key, line);
  } else if (sub == "amplitude") {
    s.amplitude = parse_double(val, key, line);
  } else if (sub == "kx") {
    s.kx = parse_int(val, key, line);
  } else if (sub == "ky") {
    s.ky = parse_int(val, key, line);
  } else if (sub == "width") {
    s.width = parse_double(val, key, line);
  } else if (sub == "center_x") {
    s.center_x = parse_double(val, key, line);
  } else if (sub == "center_y") {
    s.center_y = parse_double(val, key, line);
  } else {
    return false;
  }
  return true;
}

bool handle_alpha_key(TransitionFn& fn, const std::string& sub, const std::string& key,
                      const std::string& val, int line) {
  if (sub == "form") {
    if (val == "constant") fn.form = TransitionFn::Form::constant;
    else if (val == "saturating") fn.form = TransitionFn::Form::saturating;
    else
      throw ConfigError("line " + std::to_string(line) +
                            ": unknown transition form '" + val +
                            "' (constant | saturating)",
                        line);
  } else if (sub == "a") {
    fn.a = parse_double(val, key, line);
  } else if (sub == "b") {
    fn.b = parse_double(val, key, line);
  } else {
    return false;
  }
  return true;
}

} // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg = default_config();
  int dim = cfg.grid.dim;
  int nx = cfg.grid.nx, ny = -1;
  double lx = cfg.grid.lx, ly = -1.0;

  std::stringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value",
                        line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    // An empty value is allowed (it clears string-valued keys); numeric keys
    // reject it when the number is parsed.
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value",
                        line_no);
    }

    bool handled = true;
    if (key == "mode") {
      if (val == "simulate") cfg.mode = RunMode::simulate;
      else if (val == "sweep") cfg.mode = RunMode::sweep;
      else if (val == "convergence") cfg.mode = RunMode::convergence;
      else if (val == "weakcheck") cfg.mode = RunMode::weakcheck;
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown mode '" + val +
                              "' (simulate | sweep | convergence | weakcheck)",
                          line_no);
    } else if (key == "grid.dim") {
      dim = parse_int(val, key, line_no);
      if (dim != 1 && dim != 2) {
        throw ConfigError("line " + std::to_string(line_no) + ": grid.dim must be 1 or 2",
                          line_no);
      }
    } else if (key == "grid.nx") {
      nx = parse_int(val, key, line_no);
    } else if (key == "grid.ny") {
      ny = parse_int(val, key, line_no);
    } else if (key == "grid.lx") {
      lx = parse_double(val, key, line_no);
    } else if (key == "grid.ly") {
      ly = parse_double(val, key, line_no);
    } else if (key == "model.a1") {
      cfg.params.a1 = parse_double(val, key, line_no);
    } else if (key == "model.a2") {
      cfg.params.a2 = parse_double(val, key, line_no);
    } else if (key == "model.b_h") {
      cfg.params.b_h = parse_double(val, key, line_no);
    } else if (key == "model.b_tau") {
      cfg.params.b_tau = parse_double(val, key, line_no);
    } else if (key == "model.beta") {
      cfg.params.beta = parse_double(val, key, line_no);
    } else if (key == "model.gamma1") {
      cfg.params.gamma1 = parse_double(val, key, line_no);
    } else if (key == "model.gamma2") {
      cfg.params.gamma2 = parse_double(val, key, line_no);
    } else if (key == "model.delta") {
      cfg.params.delta = parse_double(val, key, line_no);
    } else if (key == "model.mu") {
      cfg.params.mu = parse_double(val, key, line_no);
    } else if (key == "model.sigma") {
      cfg.params.sigma = parse_double(val, key, line_no);
    } else if (key.rfind("model.alpha1.", 0) == 0) {
      handled = handle_alpha_key(cfg.params.alpha1, key.substr(13), key, val, line_no);
    } else if (key.rfind("model.alpha2.", 0) == 0) {
      handled = handle_alpha_key(cfg.params.alpha2, key.substr(13), key, val, line_no);
    } else if (key == "reg.eps") {
      cfg.reg.eps = parse_double(val, key, line_no);
    } else if (key == "reg.theta") {
      cfg.reg.theta = parse_int(val, key, line_no);
    } else if (key == "control.dt_max") {
      cfg.control.dt_max = parse_double(val, key, line_no);
    } else if (key == "control.cfl_safety") {
      cfg.control.cfl_safety = parse_double(val, key, line_no);
    } else if (key == "control.t_end") {
      cfg.control.t_end = parse_double(val, key, line_no);
    } else if (key == "control.floor") {
      cfg.control.floor = parse_double(val, key, line_no);
    } else if (key == "monitors.cadence") {
      cfg.monitors.cadence = parse_double(val, key, line_no);
    } else if (key == "monitors.floor") {
      cfg.monitors.floor = parse_double(val, key, line_no);
    } else if (key == "monitors.check_ledger") {
      cfg.monitors.check_ledger = parse_bool(val, key, line_no);
    } else if (key == "monitors.check_gronwall") {
      cfg.monitors.check_gronwall = parse_bool(val, key, line_no);
    } else if (key == "monitors.check_barriers") {
      cfg.monitors.check_barriers = parse_bool(val, key, line_no);
    } else if (key == "monitors.check_entropy") {
      cfg.monitors.check_entropy = parse_bool(val, key, line_no);
    } else if (key == "monitors.check_gradient_l2") {
      cfg.monitors.check_gradient_l2 = parse_bool(val, key, line_no);
    } else if (key == "monitors.soft_entropy_cap") {
      cfg.monitors.soft_entropy_cap = parse_bool(val, key, line_no);
    } else if (key == "monitors.cap_fit_fraction") {
      cfg.monitors.cap_fit_fraction = parse_double(val, key, line_no);
    } else if (key == "monitors.cap_overshoot") {
      cfg.monitors.cap_overshoot = parse_double(val, key, line_no);
    } else if (key == "monitors.ledger_tolerance_factor") {
      cfg.monitors.ledger_tolerance_factor = parse_double(val, key, line_no);
    } else if (key == "monitors.barrier_slack") {
      cfg.monitors.barrier_slack = parse_double(val, key, line_no);
    } else if (key == "monitors.gronwall_slack") {
      cfg.monitors.gronwall_slack = parse_double(val, key, line_no);
    } else if (key == "monitors.abort_on_hard_failure") {
      cfg.monitors.abort_on_hard_failure = parse_bool(val, key, line_no);
    } else if (key == "monitors.failure_snapshot_path") {
      cfg.monitors.failure_snapshot_path = val;
    } else if (key == "run.save_cadence") {
      cfg.save_cadence = parse_double(val, key, line_no);
    } else if (key.rfind("init.c1.", 0) == 0) {
      handled = handle_init_key(cfg.init_c1, key.substr(8), key, val, line_no);
    } else if (key.rfind("init.c2.", 0) == 0) {
      handled = handle_init_key(cfg.init_c2, key.substr(8), key, val, line_no);
    } else if (key.rfind("init.h.", 0) == 0) {
      handled = handle_init_key(cfg.init_h, key.substr(7), key, val, line_no);
    } else if (key.rfind("init.tau.", 0) == 0) {
      handled = handle_init_key(cfg.init_tau, key.substr(9), key, val, line_no);
    } else if (key == "output.series") {
      cfg.series_path = val;
    } else if (key == "output.snapshot") {
      cfg.snapshot_path = val;
    } else if (key == "output.checkpoint") {
      cfg.checkpoint_path = val;
    } else if (key == "output.sweep_csv") {
      cfg.sweep_csv_path = val;
    } else if (key == "sweep.eps") {
      cfg.sweep_eps = parse_double_list(val, key, line_no);
    } else if (key == "sweep.threads") {
      cfg.sweep_threads = parse_int(val, key, line_no);
    } else if (key == "convergence.n") {
      cfg.convergence_n = parse_int_list(val, key, line_no);
    } else if (key == "weakcheck.sign_corrected") {
      cfg.defeq4_sign_corrected = parse_bool(val, key, line_no);
    } else {
      handled = false;
    }
    if (!handled) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                        line_no);
    }
  }

  try {
    if (dim == 1) {
      cfg.grid = Grid::line(nx, lx);
    } else {
      cfg.grid = Grid::rect(nx, ny >= 0 ? ny : nx, lx, ly >= 0.0 ? ly : lx);
    }
    cfg.params.validate();
    cfg.reg.validate(cfg.grid.dim);
    cfg.control.validate();
    cfg.monitors.validate();
    if (!(cfg.save_cadence >= 0.0) || !std::isfinite(cfg.save_cadence)) {
      throw std::invalid_argument("run.save_cadence must be nonnegative and finite");
    }
    for (std::size_t i = 0; i < cfg.sweep_eps.size(); ++i) {
      const double e = cfg.sweep_eps[i];
      Regularization{e, cfg.reg.theta}.validate(cfg.grid.dim);
      if (!(e > 0.0)) {
        throw std::invalid_argument(
            "sweep.eps entries must be positive (run the zero-regularization "
            "limit with mode = simulate)");
      }
      if (i > 0 && !(e < cfg.sweep_eps[i - 1])) {
        throw std::invalid_argument("sweep.eps must be strictly decreasing");
      }
    }
    for (const int n : cfg.convergence_n) {
      if (n < 3) throw std::invalid_argument("convergence.n entries need at least 3 cells");
    }
    if (cfg.sweep_threads < 0) throw std::invalid_argument("sweep.threads must be >= 0");
    for (const InitSpec* s : {&cfg.init_c1, &cfg.init_c2, &cfg.init_h, &cfg.init_tau}) {
      if (!(s->amplitude >= 0.0)) throw std::invalid_argument("init amplitudes must be nonnegative");
      if (!(s->width > 0.0)) throw std::invalid_argument("init widths must be positive");
      if (s->kx < 0 || s->ky < 0) throw std::invalid_argument("init mode numbers must be nonnegative");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

void put_kv(std::string& out, const char* key, const std::string& val) {
  out += key;
  out += " = ";
  out += val;
  out += '\n';
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

void dump_init(std::string& out, const char* name, const InitSpec& s) {
  const std::string base = std::string("init.") + name + ".";
  const char* kind = s.kind == InitSpec::Kind::constant
                         ? "constant"
                         : (s.kind == InitSpec::Kind::cosine ? "cosine" : "gaussian");
  put_kv(out, (base + "kind").c_str(), kind);
  put_kv(out, (base + "value").c_str(), fmt_double(s.value));
  put_kv(out, (base + "offset").c_str(), fmt_double(s.offset));
  put_kv(out, (base + "amplitude").c_str(), fmt_double(s.amplitude));
  put_kv(out, (base + "kx").c_str(), std::to_string(s.kx));
  put_kv(out, (base + "ky").c_str(), std::to_string(s.ky));
  put_kv(out, (base + "width").c_str(), fmt_double(s.width));
  put_kv(out, (base + "center_x").c_str(), fmt_double(s.center_x));
  put_kv(out, (base + "center_y").c_str(), fmt_double(s.center_y));
}

void dump_alpha(std::string& out, const char* name, const TransitionFn& fn) {
  const std::string base = std::string("model.") + name + ".";
  put_kv(out, (base + "form").c_str(),
         fn.form == TransitionFn::Form::constant ? "constant" : "saturating");
  put_kv(out, (base + "a").c_str(), fmt_double(fn.a));
  put_kv(out, (base + "b").c_str(), fmt_double(fn.b));
}

} // namespace

std::string dump_config(const RunConfig& cfg) {
  std::string out;
  const char* mode = cfg.mode == RunMode::simulate
                         ? "simulate"
                         : (cfg.mode == RunMode::sweep
                                ? "sweep"
                                : (cfg.mode == RunMode::convergence ? "convergence"
                                                                    : "weakcheck"));
  put_kv(out, "mode", mode);
  put_kv(out, "grid.dim", std::to_string(cfg.grid.dim));
  put_kv(out, "grid.nx", std::to_string(cfg.grid.nx));
  put_kv(out, "grid.ny", std::to_string(cfg.grid.ny));
  put_kv(out, "grid.lx", fmt_double(cfg.grid.lx));
  put_kv(out, "grid.ly", fmt_double(cfg.grid.ly));
  put_kv(out, "model.a1", fmt_double(cfg.params.a1));
  put_kv(out, "model.a2", fmt_double(cfg.params.a2));
  put_kv(out, "model.b_h", fmt_double(cfg.params.b_h));
  put_kv(out, "model.b_tau", fmt_double(cfg.params.b_tau));
  put_kv(out, "model.beta", fmt_double(cfg.params.beta));
  put_kv(out, "model.gamma1", fmt_double(cfg.params.gamma1));
  put_kv(out, "model.gamma2", fmt_double(cfg.params.gamma2));
  put_kv(out, "model.delta", fmt_double(cfg.params.delta));
  put_kv(out, "model.mu", fmt_double(cfg.params.mu));
  put_kv(out, "model.sigma", fmt_double(cfg.params.sigma));
  dump_alpha(out, "alpha1", cfg.params.alpha1);
  dump_alpha(out, "alpha2", cfg.params.alpha2);
  put_kv(out, "reg.eps", fmt_double(cfg.reg.eps));
  put_kv(out, "reg.theta", std::to_string(cfg.reg.theta));
  put_kv(out, "control.dt_max", fmt_double(cfg.control.dt_max));
  put_kv(out, "control.cfl_safety", fmt_double(cfg.control.cfl_safety));
  put_kv(out, "control.t_end", fmt_double(cfg.control.t_end));
  put_kv(out, "control.floor", fmt_double(cfg.control.floor));
  put_kv(out, "monitors.cadence", fmt_double(cfg.monitors.cadence));
  put_kv(out, "monitors.floor", fmt_double(cfg.monitors.floor));
  put_kv(out, "monitors.check_ledger", fmt_bool(cfg.monitors.check_ledger));
  put_kv(out, "monitors.check_gronwall", fmt_bool(cfg.monitors.check_gronwall));
  put_kv(out, "monitors.check_barriers", fmt_bool(cfg.monitors.check_barriers));
  put_kv(out, "monitors.check_entropy", fmt_bool(cfg.monitors.check_entropy));
  put_kv(out, "monitors.check_gradient_l2", fmt_bool(cfg.monitors.check_gradient_l2));
  put_kv(out, "monitors.soft_entropy_cap", fmt_bool(cfg.monitors.soft_entropy_cap));
  put_kv(out, "monitors.cap_fit_fraction", fmt_double(cfg.monitors.cap_fit_fraction));
  put_kv(out, "monitors.cap_overshoot", fmt_double(cfg.monitors.cap_overshoot));
  put_kv(out, "monitors.ledger_tolerance_factor",
         fmt_double(cfg.monitors.ledger_tolerance_factor));
  put_kv(out, "monitors.barrier_slack", fmt_double(cfg.monitors.barrier_slack));
  put_kv(out, "monitors.gronwall_slack", fmt_double(cfg.monitors.gronwall_slack));
  put_kv(out, "monitors.abort_on_hard_failure",
         fmt_bool(cfg.monitors.abort_on_hard_failure));
  put_kv(out, "monitors.failure_snapshot_path", cfg.monitors.failure_snapshot_path);
  put_kv(out, "run.save_cadence", fmt_double(cfg.save_cadence));
  dump_init(out, "c1", cfg.init_c1);
  dump_init(out, "c2", cfg.init_c2);
  dump_init(out, "h", cfg.init_h);
  dump_init(out, "tau", cfg.init_tau);
  put_kv(out, "output.series", cfg.series_path);
  put_kv(out, "output.snapshot", cfg.snapshot_path);
  put_kv(out, "output.checkpoint", cfg.checkpoint_path);
  put_kv(out, "output.sweep_csv", cfg.sweep_csv_path);
  {
    std::string list;
    for (std::size_t i = 0; i < cfg.sweep_eps.size(); ++i) {
      if (i) list += ",";
      list += fmt_double(cfg.sweep_eps[i]);
    }
    put_kv(out, "sweep.eps", list);
  }
  put_kv(out, "sweep.threads", std::to_string(cfg.sweep_threads));
  {
    std::string list;
    for (std::size_t i = 0; i < cfg.convergence_n.size(); ++i) {
      if (i) list += ",";
      list += std::to_string(cfg.convergence_n[i]);
    }
    put_kv(out, "convergence.n", list);
  }
  put_kv(out, "weakcheck.sign_corrected", fmt_bool(cfg.defeq4_sign_corrected));
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string dump = dump_config(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kPositivityFloor = 1e-8;

void fill_field(Field& f, const InitSpec& s) {
  const Grid& g = f.grid;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.dim == 2 ? g.y_center(iy) : 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x_center(ix);
      double v = 0.0;
      switch (s.kind) {
        case InitSpec::Kind::constant:
          v = s.value;
          break;
        case InitSpec::Kind::cosine: {
          double bump = 0.5 * (1.0 + std::cos(s.kx * kPi * x / g.lx));
          if (g.dim == 2) bump *= 0.5 * (1.0 + std::cos(s.ky * kPi * y / g.ly));
          v = s.offset + s.amplitude * bump;
          break;
        }
        case InitSpec::Kind::gaussian: {
          const double dx = x - s.center_x;
          const double dy = g.dim == 2 ? y - s.center_y : 0.0;
          v = s.offset +
              s.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * s.width * s.width));
          break;
        }
      }
      f[g.index(ix, iy)] = v;
    }
  }
}

} // namespace

State build_initial_state(const RunConfig& cfg) {
  State s(cfg.grid, 0.0);
  fill_field(s.c1, cfg.init_c1);
  fill_field(s.c2, cfg.init_c2);
  fill_field(s.h, cfg.init_h);
  fill_field(s.tau, cfg.init_tau);

  // Cell densities: nonnegative with positive total mass, lifted onto a
  // positive floor so the whole family starts strictly positive.
  struct CellEntry {
    Field* f;
    const char* name;
  };
  for (const CellEntry e : {CellEntry{&s.c1, "init.c1"}, CellEntry{&s.c2, "init.c2"}}) {
    if (!field_finite(*e.f)) throw ConfigError(std::string(e.name) + ": initial data must be finite");
    const double mn = field_min(*e.f);
    if (mn > 0.0) continue;
    if (mn >= 0.0 && integrate(*e.f) > 0.0) {
      for (auto& v : e.f->v) v += kPositivityFloor;
    } else {
      throw ConfigError(std::string(e.name) +
                        ": initial cell density must be nonnegative with positive total mass");
    }
  }
  // Cue fields: strictly positive everywhere.
  for (const CellEntry e : {CellEntry{&s.h, "init.h"}, CellEntry{&s.tau, "init.tau"}}) {
    if (!field_finite(*e.f)) throw ConfigError(std::string(e.name) + ": initial data must be finite");
    if (!(field_min(*e.f) > 0.0)) {
      throw ConfigError(std::string(e.name) +
                        ": initial cue field must be strictly positive everywhere");
    }
  }
  return s;
}

} // namespace haptofv
