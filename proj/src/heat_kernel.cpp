#include "mfg/heat_kernel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <vector>

#include "mfg/errors.hpp"

namespace mfg {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// Column-normalized 1D kernel matrix along one axis, stored row-major:
// entry (i, j) is weight_j * G(x_i - x_j, t) / colsum_j, so that the
// trapezoid integral of column j is 1.
std::vector<double> kernel_matrix(const Grid& g, double t) {
  const int n = g.nx;
  const double dx = g.dx();
  std::vector<double> k(static_cast<std::size_t>(n) * n);
  std::vector<double> colsum(n, 0.0);
  const auto trap = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 * dx : dx; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = (i - j) * dx;
      const double v = std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
      k[static_cast<std::size_t>(i) * n + j] = v;
      colsum[j] += trap(i) * v;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k[static_cast<std::size_t>(i) * n + j] *= trap(j) / colsum[j];
  return k;
}

}  // namespace

Slice heat_kernel_convolve(std::span<const double> initial, double t, const Grid& g) {
  if (!(t > 0.0)) throw DomainError("heat kernel time must be positive");
  if (initial.size() != g.nodes()) throw DomainError("initial slice does not match the grid");
  const int n = g.nx;
  const auto k = kernel_matrix(g, t);
  const auto apply = [&](std::span<const double> in, Slice& out, std::size_t stride, std::size_t offset) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = k.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) acc += row[j] * in[offset + j * stride];
      out[offset + i * stride] = acc;
    }
  };
  Slice out(initial.size());
  if (g.dim == 1) {
    apply(initial, out, 1, 0);
    return out;
  }
  Slice tmp(initial.size());
  for (int j = 0; j < n; ++j) apply(initial, tmp, 1, static_cast<std::size_t>(j) * n);
  for (int i = 0; i < n; ++i) apply(tmp, out, static_cast<std::size_t>(n), static_cast<std::size_t>(i));
  return out;
}

double analytic_norm_exponent(const HeatKernelQuery& q) {
  const double N = q.dim;
  const double e = q.exponent;
  if (q.kind == KernelNorm::Kernel) return N / (2.0 * e) - N / 2.0 + 1.0 / e;
  return N / (2.0 * e) - (N + 1.0) / 2.0 + 1.0 / e;
}

namespace {

// integral over (0, t) x R^N of |G|^q (or |grad G|^q), by nested
// double-exponential quadrature. Space is integrated radially; time through
// s = t e^{-tau}, which puts a log-spaced mesh on (0, t].
double spacetime_integral(const HeatKernelQuery& q) {
  const double N = q.dim;
  const double p = q.exponent;
  const double omega = q.dim == 1 ? 2.0 : 2.0 * kPi;
  const double grad_power = q.kind == KernelNorm::Gradient ? p : 0.0;
  boost::math::quadrature::exp_sinh<double> outer;
  boost::math::quadrature::exp_sinh<double> inner;

  // Spatial integral at time s, returned as a log so tiny s neither
  // overflows nor underflows. The radius is measured in units of sqrt(s)
  // (rho = sqrt(s) y) so the quadrature sees an O(1)-wide integrand for
  // every s, and the integrand's typical size is factored out first.
  const auto log_space = [&](double s) {
    const double log_root = 0.5 * std::log(s);
    const double log_scale = -0.5 * N * p * std::log(4.0 * kPi * s) + N * log_root +
                             grad_power * (-log_root - std::log(2.0));
    const auto integrand = [&](double y) {
      if (!(y > 0.0) || !std::isfinite(y)) return 0.0;
      const double log_rho = log_root + std::log(y);
      const double log_g = -0.5 * N * std::log(4.0 * kPi * s) - 0.25 * y * y;
      // rho^(N-1) d(rho) = s^(N/2) y^(N-1) dy
      double log_v = p * log_g + N * log_root - log_scale;
      if (q.dim == 2) log_v += std::log(y);
      if (grad_power > 0.0) log_v += grad_power * (log_rho - std::log(2.0 * s));
      return omega * std::exp(log_v);
    };
    return std::log(inner.integrate(integrand, 1e-13)) + log_scale;
  };

  const auto time_integrand = [&](double tau) {
    const double s = q.time * std::exp(-tau);
    if (!(s > 0.0) || !std::isfinite(tau)) return 0.0;
    return std::exp(std::log(q.time) - tau + log_space(s));
  };
  return outer.integrate(time_integrand, 1e-12);
}

}  // namespace

HeatKernelNorm heat_kernel_spacetime_norm(const HeatKernelQuery& q) {
  if (q.dim != 1 && q.dim != 2) throw DomainError("heat kernel norms need dim 1 or 2");
  if (!(q.exponent >= 1.0)) throw DomainError("norm exponent must be at least 1");
  if (!(q.time > 0.0)) throw DomainError("time must be positive");
  const double beta = analytic_norm_exponent(q);
  if (!(beta > 0.0)) {
    throw DivergenceError("space-time norm is infinite: the time integral diverges at s = 0", beta);
  }

  HeatKernelNorm out;
  out.analytic_exponent = beta;
  out.value = std::pow(spacetime_integral(q), 1.0 / q.exponent);

  constexpr int kFitPoints = 11;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < kFitPoints; ++i) {
    HeatKernelQuery qi = q;
    qi.time = q.time * std::pow(10.0, -1.0 + static_cast<double>(i) / (kFitPoints - 1));
    const double x = std::log(qi.time);
    const double y = std::log(spacetime_integral(qi)) / q.exponent;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.fitted_exponent = (kFitPoints * sxy - sx * sy) / (kFitPoints * sxx - sx * sx);
  return out;
}

}  // namespace mfg
