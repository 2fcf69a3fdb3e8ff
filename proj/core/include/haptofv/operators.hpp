#pragma once

#include "haptofv/grid.hpp"

namespace haptofv {

// Five-point (three-point in 1D) Laplacian with mirrored ghost cells:
// boundary face gradients are zero, so cell sums telescope to zero.
void laplacian_apply_into(const Field& u, Field& out);
Field laplacian_apply(const Field& u);

// Two-point difference per interior face divided by the spacing.
void face_gradient_into(const Field& w, FaceFluxes& g);
FaceFluxes face_gradient(const Field& w);

// Upwind divergence of c1 advected by a face velocity field:
// flux through a face is velocity times the upwind cell value; returns
// div(c1 * vel) cell-wise (the transport term enters the c1 equation
// with a minus sign).
void upwind_divergence_into(const Field& c1, const FaceFluxes& vel, Field& out);
Field upwind_divergence(const Field& c1, const FaceFluxes& vel);

// div(b * c1 * grad w) with first-order upwinding in the face velocity
// b * (face gradient of w). c1 must be nonnegative.
Field haptotactic_divergence(const Field& c1, const Field& w, double b);

// Midpoint quadrature: cell_volume times a deterministic row-major
// pairwise sum of the cell values.
double integrate(const Field& u);

/// Face-based quadrature of |grad u|^2 / u with the denominator floored:
// sum over interior faces of (face difference / spacing)^2 divided by
// max(face average of u, floor), times the face volume, plus half-strip
// boundary contributions extrapolated from the adjacent interior face so
// the rule covers the whole domain. Optional per-face weight (face average
// of the weight field). floor_engaged reports that some face touched the
// degenerate region (an adjacent cell below the floor), i.e. the quotient
// is being stabilized there.
double integrate_grad_sq_over(const Field& u, double floor,
                              const Field* weight = nullptr,
                              bool* floor_engaged = nullptr);

// Plain face-based quadrature of |grad u|^2 (interior faces only; boundary
// faces contribute zero under the Neumann condition).
double integrate_grad_sq(const Field& u);

} // namespace haptofv
