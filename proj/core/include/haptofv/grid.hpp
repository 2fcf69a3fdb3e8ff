#pragma once

#include <cstddef>
#include <vector>

namespace haptofv {

// Uniform cell-centered grid on [0,Lx] (dim 1) or [0,Lx]x[0,Ly] (dim 2),
// zero-flux boundaries. Cell (ix,iy) has center ((ix+1/2)hx, (iy+1/2)hy)
// and linear index iy*nx + ix (row-major, x fastest).
struct Grid {
  int dim = 1;
  int nx = 0;
  int ny = 1;
  double lx = 0.0;
  double ly = 0.0;

  static Grid line(int nx, double lx);
  static Grid rect(int nx, int ny, double lx, double ly);

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_volume() const { return dim == 1 ? hx() : hx() * hy(); }
  double min_spacing() const { return dim == 1 ? hx() : (hx() < hy() ? hx() : hy()); }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
  double x_center(int ix) const { return (ix + 0.5) * hx(); }
  double y_center(int iy) const { return (iy + 0.5) * hy(); }

  bool operator==(const Grid&) const = default;
};

// One scalar unknown per cell.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), v(g.cells(), fill) {}

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

double field_min(const Field& u);
double field_max(const Field& u);
bool field_finite(const Field& u);
bool field_nonnegative(const Field& u);

// One scalar per interior face, split by axis. x-faces sit between cells
// (ix,iy) and (ix+1,iy): (nx-1)*ny of them, index iy*(nx-1)+ixf. y-faces
// (dim 2) sit between (ix,iy) and (ix,iy+1): nx*(ny-1), index iyf*nx+ix.
// Boundary faces carry zero flux by the Neumann condition and are not stored.
struct FaceFluxes {
  Grid grid;
  std::vector<double> x;
  std::vector<double> y;

  FaceFluxes() = default;
  explicit FaceFluxes(const Grid& g)
      : grid(g),
        x(static_cast<std::size_t>(g.nx - 1) * g.ny, 0.0),
        y(g.dim == 2 ? static_cast<std::size_t>(g.nx) * (g.ny - 1) : 0, 0.0) {}

  std::size_t xface(int ixf, int iy) const { return static_cast<std::size_t>(iy) * (grid.nx - 1) + ixf; }
  std::size_t yface(int ix, int iyf) const { return static_cast<std::size_t>(iyf) * grid.nx + ix; }
};

} // namespace haptofv
