#include "haptofv/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "haptofv/numerics.hpp"

namespace haptofv {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace

void laplacian_apply_into(const Field& u, Field& out) {
  require_same_grid(u.grid, out.grid, "laplacian_apply");
  const Grid& g = u.grid;
  const int nx = g.nx, ny = g.ny;
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  for (int iy = 0; iy < ny; ++iy) {
    const std::size_t row = g.index(0, iy);
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t i = row + ix;
      const double gr = ix + 1 < nx ? u[i + 1] - u[i] : 0.0;
      const double gl = ix > 0 ? u[i] - u[i - 1] : 0.0;
      out[i] = (gr - gl) * ihx2;
    }
  }
  if (g.dim == 2) {
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const std::size_t i = g.index(ix, iy);
        const double gu = iy + 1 < ny ? u[i + nx] - u[i] : 0.0;
        const double gd = iy > 0 ? u[i] - u[i - nx] : 0.0;
        out[i] += (gu - gd) * ihy2;
      }
    }
  }
}

Field laplacian_apply(const Field& u) {
  Field out(u.grid);
  laplacian_apply_into(u, out);
  return out;
}

void face_gradient_into(const Field& w, FaceFluxes& gout) {
  require_same_grid(w.grid, gout.grid, "face_gradient");
  const Grid& g = w.grid;
  const double ihx = 1.0 / g.hx();
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      gout.x[gout.xface(ixf, iy)] = (w[l + 1] - w[l]) * ihx;
    }
  }
  if (g.dim == 2) {
    const double ihy = 1.0 / g.hy();
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        gout.y[gout.yface(ix, iyf)] = (w[l + g.nx] - w[l]) * ihy;
      }
    }
  }
}

FaceFluxes face_gradient(const Field& w) {
  FaceFluxes gout(w.grid);
  face_gradient_into(w, gout);
  return gout;
}

void upwind_divergence_into(const Field& c1, const FaceFluxes& vel, Field& out) {
  require_same_grid(c1.grid, vel.grid, "upwind_divergence");
  require_same_grid(c1.grid, out.grid, "upwind_divergence");
  const Grid& g = c1.grid;
  for (auto& x : out.v) x = 0.0;
  const double ihx = 1.0 / g.hx();
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      const double v = vel.x[vel.xface(ixf, iy)];
      const double flux = v > 0.0 ? v * c1[l] : v * c1[l + 1];
      out[l] += flux * ihx;
      out[l + 1] -= flux * ihx;
    }
  }
  if (g.dim == 2) {
    const double ihy = 1.0 / g.hy();
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        const double v = vel.y[vel.yface(ix, iyf)];
        const double flux = v > 0.0 ? v * c1[l] : v * c1[l + g.nx];
        out[l] += flux * ihy;
        out[l + g.nx] -= flux * ihy;
      }
    }
  }
}

Field upwind_divergence(const Field& c1, const FaceFluxes& vel) {
  Field out(c1.grid);
  upwind_divergence_into(c1, vel, out);
  return out;
}

Field haptotactic_divergence(const Field& c1, const Field& w, double b) {
  require_same_grid(c1.grid, w.grid, "haptotactic_divergence");
  if (!field_nonnegative(c1)) {
    throw std::invalid_argument("haptotactic_divergence: cell density must be nonnegative");
  }
  if (!std::isfinite(b)) {
    throw std::invalid_argument("haptotactic_divergence: sensitivity must be finite");
  }
  FaceFluxes vel = face_gradient(w);
  for (auto& v : vel.x) v *= b;
  for (auto& v : vel.y) v *= b;
  return upwind_divergence(c1, vel);
}

double integrate(const Field& u) {
  return pairwise_sum(u.v) * u.grid.cell_volume();
}

namespace {

// Shared face-quadrature walker for |grad u|^2-type integrals. For each
// grid line along the axis it visits interior faces in order and adds
// half-width boundary strips carrying the first/last interior face's
// integrand, so the quadrature covers the whole domain.
template <typename Term>
double face_quadrature_with_strips(const Grid& g, Term term) {
  double total = 0.0;
  const double hx = g.hx(), hy = g.hy();
  const double xvol = g.dim == 1 ? hx : hx * hy;
  for (int iy = 0; iy < g.ny; ++iy) {
    double first = 0.0, last = 0.0;
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      const double val = term(l, l + 1, hx);
      if (ixf == 0) first = val;
      last = val;
      total += val * xvol;
    }
    total += (first + last) * 0.5 * xvol;
  }
  if (g.dim == 2) {
    const double yvol = hx * hy;
    for (int ix = 0; ix < g.nx; ++ix) {
      double first = 0.0, last = 0.0;
      for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
        const std::size_t l = g.index(ix, iyf);
        const double val = term(l, l + g.nx, hy);
        if (iyf == 0) first = val;
        last = val;
        total += val * yvol;
      }
      total += (first + last) * 0.5 * yvol;
    }
  }
  return total;
}

} // namespace

double integrate_grad_sq_over(const Field& u, double floor, const Field* weight,
                              bool* floor_engaged) {
  if (!(floor > 0.0)) throw std::invalid_argument("integrate_grad_sq_over: floor must be positive");
  if (!field_nonnegative(u)) {
    throw std::invalid_argument("integrate_grad_sq_over: field must be nonnegative");
  }
  if (weight) require_same_grid(u.grid, weight->grid, "integrate_grad_sq_over");
  bool engaged = false;
  const double total = face_quadrature_with_strips(
      u.grid, [&](std::size_t l, std::size_t r, double spacing) {
        const double grad = (u[r] - u[l]) / spacing;
        const double ubar = 0.5 * (u[l] + u[r]);
        if (u[l] < floor || u[r] < floor) engaged = true;
        double val = grad * grad / (ubar > floor ? ubar : floor);
        if (weight) val *= 0.5 * ((*weight)[l] + (*weight)[r]);
        return val;
      });
  if (floor_engaged) *floor_engaged = engaged;
  return total;
}

double integrate_grad_sq(const Field& u) {
  const Grid& g = u.grid;
  double total = 0.0;
  const double hx = g.hx(), hy = g.hy();
  const double xvol = g.dim == 1 ? hx : hx * hy;
  const double ihx = 1.0 / hx;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ixf = 0; ixf < g.nx - 1; ++ixf) {
      const std::size_t l = g.index(ixf, iy);
      const double grad = (u[l + 1] - u[l]) * ihx;
      total += grad * grad * xvol;
    }
  }
  if (g.dim == 2) {
    const double yvol = hx * hy;
    const double ihy = 1.0 / hy;
    for (int iyf = 0; iyf < g.ny - 1; ++iyf) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t l = g.index(ix, iyf);
        const double grad = (u[l + g.nx] - u[l]) * ihy;
        total += grad * grad * yvol;
      }
    }
  }
  return total;
}

} // namespace haptofv
