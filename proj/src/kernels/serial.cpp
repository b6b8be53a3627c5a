#include <vector>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"

namespace mfg::kernels {

namespace detail {

bool thomas_line(int n, const double* sub, const double* diag, const double* sup, double* rhs,
                 double* scratch) noexcept {
  double pivot = diag[0];
  if (pivot == 0.0) return false;
  rhs[0] /= pivot;
  for (int i = 1; i < n; ++i) {
    scratch[i] = sup[i - 1] / pivot;
    pivot = diag[i] - sub[i] * scratch[i];
    if (pivot == 0.0) return false;
    rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / pivot;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= scratch[i + 1] * rhs[i + 1];
  return true;
}

}  // namespace detail

namespace serial {

void laplacian(const Grid& g, std::span<const double> in, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = detail::laplacian_at(g, in, k);
}

void gradient(const Grid& g, int axis, std::span<const double> in, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = detail::gradient_at(g, axis, in, k);
}

void drift_divergence(const Grid& g, const FaceField& b, std::span<const double> mu, std::span<double> out) {
  for (std::size_t k = 0; k < mu.size(); ++k) out[k] = detail::drift_divergence_at(g, b, mu, k);
}

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) acc += values[k] * weights[k];
  return acc;
}

void thomas_batch(int lines, int n, std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs) {
  std::vector<double> scratch(static_cast<std::size_t>(n));
  for (int l = 0; l < lines; ++l) {
    const std::size_t off = static_cast<std::size_t>(l) * n;
    if (!detail::thomas_line(n, sub.data() + off, diag.data() + off, sup.data() + off, rhs.data() + off,
                             scratch.data())) {
      throw SolverError("tridiagonal solve hit a zero pivot");
    }
  }
}

}  // namespace serial
}  // namespace mfg::kernels
