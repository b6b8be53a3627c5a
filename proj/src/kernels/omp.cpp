#include <omp.h>

#include <algorithm>
#include <vector>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"

namespace mfg::kernels::omp {

namespace {
constexpr std::size_t kBlock = 4096;
}

void laplacian(const Grid& g, std::span<const double> in, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = detail::laplacian_at(g, in, static_cast<std::size_t>(k));
}

void gradient(const Grid& g, int axis, std::span<const double> in, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = detail::gradient_at(g, axis, in, static_cast<std::size_t>(k));
}

void drift_divergence(const Grid& g, const FaceField& b, std::span<const double> mu, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(mu.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = detail::drift_divergence_at(g, b, mu, static_cast<std::size_t>(k));
}

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  const std::size_t blocks = (values.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(values.size(), lo + kBlock);
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += values[k] * weights[k];
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void thomas_batch(int lines, int n, std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs) {
  bool ok = true;
#pragma omp parallel reduction(&& : ok)
  {
    std::vector<double> scratch(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (int l = 0; l < lines; ++l) {
      const std::size_t off = static_cast<std::size_t>(l) * n;
      ok = detail::thomas_line(n, sub.data() + off, diag.data() + off, sup.data() + off, rhs.data() + off,
                               scratch.data()) && ok;
    }
  }
  if (!ok) throw SolverError("tridiagonal solve hit a zero pivot");
}

}  // namespace mfg::kernels::omp
