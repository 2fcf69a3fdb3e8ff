#include "haptofv/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace haptofv {

namespace {

const char kSnapshotMagic[8] = {'H', 'F', 'V', 'S', 'N', 'A', 'P', '1'};
const char kCheckpointMagic[8] = {'H', 'F', 'V', 'C', 'K', 'P', 'T', '1'};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_f64(std::ostream& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

void write_i64(std::ostream& out, std::int64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

void write_u8(std::ostream& out, bool v) {
  const char b = v ? 1 : 0;
  out.write(&b, 1);
}

double read_f64(std::istream& in, const char* section, const std::string& path) {
  char buf[8];
  in.read(buf, 8);
  if (in.gcount() != 8) {
    throw std::runtime_error("snapshot read: " + path + " ends inside section '" +
                             section + "'");
  }
  double v;
  std::memcpy(&v, buf, 8);
  return v;
}

std::int64_t read_i64(std::istream& in, const char* section, const std::string& path) {
  char buf[8];
  in.read(buf, 8);
  if (in.gcount() != 8) {
    throw std::runtime_error("snapshot read: " + path + " ends inside section '" +
                             section + "'");
  }
  std::int64_t v;
  std::memcpy(&v, buf, 8);
  return v;
}

bool read_u8(std::istream& in, const char* section, const std::string& path) {
  char b;
  in.read(&b, 1);
  if (in.gcount() != 1) {
    throw std::runtime_error("snapshot read: " + path + " ends inside section '" +
                             section + "'");
  }
  return b != 0;
}

bool has_csv_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

void write_state_body(std::ostream& out, const State& s) {
  const Grid& g = s.grid();
  write_i64(out, g.dim);
  write_i64(out, g.nx);
  write_i64(out, g.ny);
  write_f64(out, g.lx);
  write_f64(out, g.ly);
  write_f64(out, s.t);
  for (const Field* f : {&s.c1, &s.c2, &s.h, &s.tau}) {
    for (const double v : f->v) write_f64(out, v);
  }
}

State read_state_body(std::istream& in, const std::string& path) {
  const std::int64_t dim = read_i64(in, "header", path);
  const std::int64_t nx = read_i64(in, "header", path);
  const std::int64_t ny = read_i64(in, "header", path);
  const double lx = read_f64(in, "header", path);
  const double ly = read_f64(in, "header", path);
  const double t = read_f64(in, "header", path);
  if (dim != 1 && dim != 2) {
    throw std::runtime_error("snapshot read: " + path + " has invalid grid dimension");
  }
  Grid g = dim == 1 ? Grid::line(static_cast<int>(nx), lx)
                    : Grid::rect(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  State s(g, 0.0);
  s.t = t;
  const char* names[4] = {"c1", "c2", "h", "tau"};
  Field* fields[4] = {&s.c1, &s.c2, &s.h, &s.tau};
  for (int k = 0; k < 4; ++k) {
    for (auto& v : fields[k]->v) v = read_f64(in, names[k], path);
  }
  return s;
}

} // namespace

std::string series_header() {
  return "t,mass_c1,mass_c2,max_h,max_tau,M_h,M_tau,entropy_F,dissipation_D,"
         "dissipation_integral,grad_h_sq,grad_tau_sq,c2_sq_integral,"
         "ledger_residual,floor_engaged,ok_ledger,ok_gronwall,ok_barrier_h,"
         "ok_barrier_tau,ok_entropy,ok_dissipation_monotone,ok_c2sq_monotone,"
         "ok_gradient_l2,ok_entropy_cap";
}

std::string series_row(const MonitorReport& r) {
  std::string out;
  const double scalars[14] = {r.t,
                              r.mass_c1,
                              r.mass_c2,
                              r.max_h,
                              r.max_tau,
                              r.barrier_h,
                              r.barrier_tau,
                              r.entropy_F,
                              r.dissipation_D,
                              r.dissipation_integral,
                              r.grad_h_sq,
                              r.grad_tau_sq,
                              r.c2_sq_integral,
                              r.ledger_residual};
  for (const double v : scalars) {
    out += fmt17(v);
    out += ',';
  }
  const bool flags[10] = {r.floor_engaged,
                          r.ok_ledger,
                          r.ok_gronwall,
                          r.ok_barrier_h,
                          r.ok_barrier_tau,
                          r.ok_entropy,
                          r.ok_dissipation_monotone,
                          r.ok_c2sq_monotone,
                          r.ok_gradient_l2,
                          r.ok_entropy_cap};
  for (int i = 0; i < 10; ++i) {
    out += flags[i] ? '1' : '0';
    if (i + 1 < 10) out += ',';
  }
  return out;
}

void write_series(const std::vector<MonitorReport>& reports, const std::string& path) {
  if (reports.empty()) {
    throw std::invalid_argument("write_series: report sequence is empty");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open series file for writing: " + path);
  out << series_header() << '\n';
  for (const auto& r : reports) out << series_row(r) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("failed writing series file: " + path);
}

void write_snapshot(const State& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  if (has_csv_extension(path)) {
    const Grid& g = s.grid();
    out << "dim,nx,ny,lx,ly,t\n";
    out << g.dim << ',' << g.nx << ',' << g.ny << ',' << fmt17(g.lx) << ','
        << fmt17(g.ly) << ',' << fmt17(s.t) << '\n';
    out << "c1,c2,h,tau\n";
    for (std::size_t i = 0; i < g.cells(); ++i) {
      out << fmt17(s.c1[i]) << ',' << fmt17(s.c2[i]) << ',' << fmt17(s.h[i]) << ','
          << fmt17(s.tau[i]) << '\n';
    }
  } else {
    out.write(kSnapshotMagic, 8);
    write_state_body(out, s);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing snapshot: " + path);
}

namespace {

State read_snapshot_csv(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim,nx,ny,lx,ly,t", 0) != 0) {
    throw std::runtime_error("snapshot read: " + path + " missing header line");
  }
  if (!std::getline(in, line)) {
    throw std::runtime_error("snapshot read: " + path + " missing header values");
  }
  int dim = 0, nx = 0, ny = 0;
  double lx = 0, ly = 0, t = 0;
  if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf", &dim, &nx, &ny, &lx, &ly, &t) != 6) {
    throw std::runtime_error("snapshot read: " + path + " has malformed header values");
  }
  if (!std::getline(in, line) || line.rfind("c1,c2,h,tau", 0) != 0) {
    throw std::runtime_error("snapshot read: " + path + " missing field column header");
  }
  Grid g = dim == 1 ? Grid::line(nx, lx) : Grid::rect(nx, ny, lx, ly);
  State s(g, 0.0);
  s.t = t;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("snapshot read: " + path + " ends inside field data (row " +
                               std::to_string(i) + " of " + std::to_string(g.cells()) + ")");
    }
    double a, b, c, d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4) {
      throw std::runtime_error("snapshot read: " + path + " has a malformed data row");
    }
    s.c1[i] = a;
    s.c2[i] = b;
    s.h[i] = c;
    s.tau[i] = d;
  }
  return s;
}

} // namespace

State read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() == 8 && std::memcmp(magic, kSnapshotMagic, 8) == 0) {
    return read_state_body(in, path);
  }
  in.clear();
  in.seekg(0);
  return read_snapshot_csv(in, path);
}

void write_checkpoint(const Checkpoint& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kCheckpointMagic, 8);
  write_i64(out, static_cast<std::int64_t>(c.config_hash));
  write_state_body(out, c.state);
  const MonitorState& m = c.monitor;
  write_f64(out, m.m0);
  write_f64(out, m.barrier_h);
  write_f64(out, m.barrier_tau);
  write_f64(out, m.entropy_F0);
  write_f64(out, m.c16);
  write_u8(out, m.c16_fitted);
  write_f64(out, m.dissipation_integral);
  write_f64(out, m.c2_sq_integral);
  write_f64(out, m.prev_dissipation_integral);
  write_f64(out, m.prev_c2_sq_integral);
  write_f64(out, m.max_ledger_residual);
  write_u8(out, m.floor_engaged);
  write_i64(out, m.k_report);
  write_i64(out, m.k_save);
  out.flush();
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8] = {};
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw std::runtime_error("checkpoint read: " + path + " missing magic header");
  }
  Checkpoint c;
  c.config_hash = static_cast<std::uint64_t>(read_i64(in, "config hash", path));
  c.state = read_state_body(in, path);
  MonitorState& m = c.monitor;
  m.m0 = read_f64(in, "monitor", path);
  m.barrier_h = read_f64(in, "monitor", path);
  m.barrier_tau = read_f64(in, "monitor", path);
  m.entropy_F0 = read_f64(in, "monitor", path);
  m.c16 = read_f64(in, "monitor", path);
  m.c16_fitted = read_u8(in, "monitor", path);
  m.dissipation_integral = read_f64(in, "monitor", path);
  m.c2_sq_integral = read_f64(in, "monitor", path);
  m.prev_dissipation_integral = read_f64(in, "monitor", path);
  m.prev_c2_sq_integral = read_f64(in, "monitor", path);
  m.max_ledger_residual = read_f64(in, "monitor", path);
  m.floor_engaged = read_u8(in, "monitor", path);
  m.k_report = read_i64(in, "monitor", path);
  m.k_save = read_i64(in, "monitor", path);
  return c;
}

} // namespace haptofv
