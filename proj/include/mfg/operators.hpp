#pragma once

// Discrete differential and quadrature operators on a Grid.
//
// Boundary convention everywhere: homogeneous Neumann / no-flux. The
// Laplacian reflects a ghost node, gradients switch to one-sided
// second-order stencils, and the drift divergence carries zero flux through
// boundary faces. Quadrature is the trapezoid rule, whose end-node weights
// are exactly the half control volumes of the flux-form schemes, so discrete
// mass is conserved in the same inner product the diagnostics use.

#include <span>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

using kernels::Backend;

Slice laplacian(std::span<const double> u, const Grid& g, Backend backend = Backend::Auto);
VectorField gradient(std::span<const double> u, const Grid& g, Backend backend = Backend::Auto);

enum class Weight { One, AbsX, X2 };

/// Trapezoid integral of u, optionally against |x| or |x|^2.
double integrate(std::span<const double> u, const Grid& g, Weight weight = Weight::One,
                 Backend backend = Backend::Auto);
/// Trapezoid integral of u * node_weights.
double integrate(std::span<const double> u, const Grid& g, std::span<const double> node_weights,
                 Backend backend = Backend::Auto);

/// div(b mu) in conservative flux form with exponentially fitted (Chang-Cooper)
/// face fluxes; diffusion is not included. Zero flux through the boundary.
Slice flux_divergence(const FaceField& b, std::span<const double> mu, const Grid& g,
                      Backend backend = Backend::Auto);
/// Node-valued drift averaged onto faces.
FaceField to_faces(const VectorField& b, const Grid& g);
/// scale * d(log w) on every face; the drift 2 grad(w)/w uses scale = 2.
FaceField log_gradient_faces(std::span<const double> w, const Grid& g, double scale);

/// Time integral by the trapezoid rule of a series sampled at the grid's time nodes.
double integrate_time(std::span<const double> series, const Grid& g);

}  // namespace mfg
