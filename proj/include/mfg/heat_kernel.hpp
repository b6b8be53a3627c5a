#pragma once

// Gaussian heat kernel G(x,t) = (4 pi t)^(-N/2) exp(-|x|^2 / 4t) as a
// reference solution and the space-time Lebesgue norms of G and grad G.

#include <span>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"

namespace mfg {

/// Discrete convolution of `initial` with G(., t). Each source column of the
/// sampled kernel is scaled to unit trapezoid mass, so mass is preserved
/// exactly. 2D applies the 1D kernel along each axis. Throws DomainError for t <= 0.
Slice heat_kernel_convolve(std::span<const double> initial, double t, const Grid& g);

enum class KernelNorm { Kernel, Gradient };

struct HeatKernelQuery {
  int dim = 1;
  double exponent = 2.0;  ///< q for the kernel, r for its gradient
  double time = 1.0;
  KernelNorm kind = KernelNorm::Kernel;
};

struct HeatKernelNorm {
  double value = 0.0;              ///< ||G||_{L^q(R^N x (0,t))} (or grad G)
  double fitted_exponent = 0.0;    ///< log-log slope over t in [time/10, time]
  double analytic_exponent = 0.0;  ///< beta_1 or beta_2
};

/// N/(2q) - N/2 + 1/q for the kernel, N/(2r) - (N+1)/2 + 1/r for the gradient.
double analytic_norm_exponent(const HeatKernelQuery& q);

/// Quadrature in space (double-exponential on the radial variable) and in
/// time (trapezoid on a log-spaced mesh), followed by a least-squares fit of
/// the exponent. Throws DivergenceError when the norm is infinite
/// (analytic exponent <= 0), DomainError for exponent < 1 or time <= 0.
HeatKernelNorm heat_kernel_spacetime_norm(const HeatKernelQuery& q);

}  // namespace mfg
