#include "haptofv/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "haptofv/state.hpp"

namespace haptofv {

namespace {

void check_axis(int n, double l, const char* axis) {
  if (n < 3) {
    throw std::invalid_argument(std::string("grid: need at least 3 cells along ") + axis);
  }
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw std::invalid_argument(std::string("grid: domain length along ") + axis +
                                " must be positive and finite");
  }
}

} // namespace

Grid Grid::line(int nx, double lx) {
  check_axis(nx, lx, "x");
  Grid g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.lx = lx;
  g.ly = 1.0;
  return g;
}

Grid Grid::rect(int nx, int ny, double lx, double ly) {
  check_axis(nx, lx, "x");
  check_axis(ny, ly, "y");
  Grid g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  return g;
}

double field_min(const Field& u) {
  double m = u.v.empty() ? 0.0 : u.v[0];
  for (auto x : u.v) m = x < m ? x : m;
  return m;
}

double field_max(const Field& u) {
  double m = u.v.empty() ? 0.0 : u.v[0];
  for (auto x : u.v) m = x > m ? x : m;
  return m;
}

bool field_finite(const Field& u) {
  for (auto x : u.v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool field_nonnegative(const Field& u) {
  for (auto x : u.v) {
    if (!(x >= 0.0)) return false;
  }
  return true;
}

void State::validate() const {
  const Grid& g = c1.grid;
  if (!(c2.grid == g) || !(h.grid == g) || !(tau.grid == g)) {
    throw std::invalid_argument("state: fields live on different grids");
  }
  if (c1.size() != g.cells() || c2.size() != g.cells() || h.size() != g.cells() ||
      tau.size() != g.cells()) {
    throw std::invalid_argument("state: field storage does not match the grid");
  }
  if (!std::isfinite(t)) throw std::invalid_argument("state: time is not finite");
  const Field* fields[] = {&c1, &c2, &h, &tau};
  const char* names[] = {"c1", "c2", "h", "tau"};
  for (int k = 0; k < 4; ++k) {
    if (!field_finite(*fields[k])) {
      throw std::invalid_argument(std::string("state: field ") + names[k] + " is not finite");
    }
    if (!field_nonnegative(*fields[k])) {
      throw std::invalid_argument(std::string("state: field ") + names[k] + " is negative");
    }
  }
}

} // namespace haptofv
