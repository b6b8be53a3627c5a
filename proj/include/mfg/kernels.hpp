#pragma once

// Data-parallel kernels behind the discrete operators.
//
// Every kernel exists twice: a plain serial reference in kernels::serial and
// an OpenMP version in kernels::omp. Both evaluate the same per-node formula;
// tests check that they agree and bench/ measures the speedup. The operator
// layer picks one via Backend.

#include <cmath>
#include <cstddef>
#include <span>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"

namespace mfg::kernels {

enum class Backend { Auto, Serial, OpenMP };

/// Problem size above which Backend::Auto dispatches to OpenMP. The choice
/// depends on size only, so a given run is reproducible on any thread count.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

inline bool parallel(Backend b, std::size_t work) noexcept {
  switch (b) {
    case Backend::Serial: return false;
    case Backend::OpenMP: return true;
    case Backend::Auto: break;
  }
  return work >= kParallelThreshold;
}

/// B(z) = z / (e^z - 1), the Scharfetter-Gummel / Chang-Cooper weight. B(0) = 1.
inline double bernoulli(double z) noexcept {
  if (std::abs(z) < 1e-8) return 1.0 - 0.5 * z;
  if (z > 700.0) return z * std::exp(-z);
  return z / std::expm1(z);
}

namespace serial {
void laplacian(const Grid& g, std::span<const double> in, std::span<double> out);
void gradient(const Grid& g, int axis, std::span<const double> in, std::span<double> out);
void drift_divergence(const Grid& g, const FaceField& b, std::span<const double> mu, std::span<double> out);
double weighted_sum(std::span<const double> values, std::span<const double> weights);
void thomas_batch(int lines, int n, std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs);
}  // namespace serial

namespace omp {
void laplacian(const Grid& g, std::span<const double> in, std::span<double> out);
void gradient(const Grid& g, int axis, std::span<const double> in, std::span<double> out);
void drift_divergence(const Grid& g, const FaceField& b, std::span<const double> mu, std::span<double> out);
/// Blocked reduction with a fixed block size, so the result does not depend
/// on the number of threads.
double weighted_sum(std::span<const double> values, std::span<const double> weights);
void thomas_batch(int lines, int n, std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs);
}  // namespace omp

// Shared per-node stencils. Both backends call these from their loops.
namespace detail {

inline double laplacian_at(const Grid& g, std::span<const double> u, std::size_t k) noexcept {
  const int nx = g.nx;
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const auto second_diff = [&](int idx, std::size_t stride) {
    const double c = u[k];
    if (idx == 0) return 2.0 * (u[k + stride] - c);
    if (idx == nx - 1) return 2.0 * (u[k - stride] - c);
    return u[k + stride] - 2.0 * c + u[k - stride];
  };
  const int i = static_cast<int>(k % nx);
  double acc = second_diff(i, 1);
  if (g.dim == 2) acc += second_diff(static_cast<int>(k / nx), static_cast<std::size_t>(nx));
  return acc * inv_dx2;
}

inline double gradient_at(const Grid& g, int axis, std::span<const double> u, std::size_t k) noexcept {
  const int nx = g.nx;
  const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(nx);
  const int idx = axis == 0 ? static_cast<int>(k % nx) : static_cast<int>(k / nx);
  const double inv_2dx = 0.5 / g.dx();
  if (idx == 0) return (-3.0 * u[k] + 4.0 * u[k + stride] - u[k + 2 * stride]) * inv_2dx;
  if (idx == nx - 1) return (3.0 * u[k] - 4.0 * u[k - stride] + u[k - 2 * stride]) * inv_2dx;
  return (u[k + stride] - u[k - stride]) * inv_2dx;
}

/// Drift-only part of the exponentially fitted face flux (total fitted flux
/// minus the pure diffusive flux), for face drift b between mu_left and mu_right.
inline double drift_flux(double b, double dx, double mu_left, double mu_right) noexcept {
  const double z = b * dx;
  return ((bernoulli(-z) - 1.0) * mu_left - (bernoulli(z) - 1.0) * mu_right) / dx;
}

inline double drift_divergence_at(const Grid& g, const FaceField& b, std::span<const double> mu,
                                  std::size_t k) noexcept {
  const int nx = g.nx;
  const double dx = g.dx();
  const int i = static_cast<int>(k % nx);
  const int j = static_cast<int>(k / nx);
  double acc = 0.0;
  for (int axis = 0; axis < g.dim; ++axis) {
    const int idx = axis == 0 ? i : j;
    const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(nx);
    const auto face = [&](int left) -> std::size_t {
      return axis == 0 ? static_cast<std::size_t>(j) * (nx - 1) + left
                       : static_cast<std::size_t>(left) * nx + i;
    };
    double out_flux = 0.0;
    double in_flux = 0.0;
    if (idx < nx - 1) out_flux = drift_flux(b.comp[axis][face(idx)], dx, mu[k], mu[k + stride]);
    if (idx > 0) in_flux = drift_flux(b.comp[axis][face(idx - 1)], dx, mu[k - stride], mu[k]);
    const double volume = (idx == 0 || idx == nx - 1) ? 0.5 * dx : dx;
    acc += (out_flux - in_flux) / volume;
  }
  return acc;
}

/// Thomas algorithm for one line; rhs is overwritten with the solution.
/// Returns false on a zero pivot.
bool thomas_line(int n, const double* sub, const double* diag, const double* sup, double* rhs,
                 double* scratch) noexcept;

}  // namespace detail

}  // namespace mfg::kernels
