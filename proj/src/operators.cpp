#include "mfg/operators.hpp"

#include <cmath>

namespace mfg {

Slice laplacian(std::span<const double> u, const Grid& g, Backend backend) {
  Slice out(u.size());
  if (kernels::parallel(backend, u.size())) {
    kernels::omp::laplacian(g, u, out);
  } else {
    kernels::serial::laplacian(g, u, out);
  }
  return out;
}

VectorField gradient(std::span<const double> u, const Grid& g, Backend backend) {
  VectorField v;
  v.dim = g.dim;
  for (int a = 0; a < g.dim; ++a) {
    v.comp[a].resize(u.size());
    if (kernels::parallel(backend, u.size())) {
      kernels::omp::gradient(g, a, u, v.comp[a]);
    } else {
      kernels::serial::gradient(g, a, u, v.comp[a]);
    }
  }
  return v;
}

double integrate(std::span<const double> u, const Grid& g, std::span<const double> node_weights,
                 Backend backend) {
  Slice w(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) w[k] = g.weight(k) * node_weights[k];
  return kernels::parallel(backend, u.size()) ? kernels::omp::weighted_sum(u, w)
                                              : kernels::serial::weighted_sum(u, w);
}

double integrate(std::span<const double> u, const Grid& g, Weight weight, Backend backend) {
  Slice w(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Point p = g.point(k);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    double factor = 1.0;
    if (weight == Weight::AbsX) factor = std::sqrt(r2);
    if (weight == Weight::X2) factor = r2;
    w[k] = g.weight(k) * factor;
  }
  return kernels::parallel(backend, u.size()) ? kernels::omp::weighted_sum(u, w)
                                              : kernels::serial::weighted_sum(u, w);
}

Slice flux_divergence(const FaceField& b, std::span<const double> mu, const Grid& g, Backend backend) {
  Slice out(mu.size());
  if (kernels::parallel(backend, mu.size())) {
    kernels::omp::drift_divergence(g, b, mu, out);
  } else {
    kernels::serial::drift_divergence(g, b, mu, out);
  }
  return out;
}

FaceField to_faces(const VectorField& b, const Grid& g) {
  FaceField f = FaceField::zeros(g);
  const int nx = g.nx;
  if (g.dim == 1) {
    for (int i = 0; i + 1 < nx; ++i) f.comp[0][i] = 0.5 * (b.comp[0][i] + b.comp[0][i + 1]);
    return f;
  }
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      f.comp[0][static_cast<std::size_t>(j) * (nx - 1) + i] = 0.5 * (b.comp[0][k] + b.comp[0][k + 1]);
    }
  }
  for (int j = 0; j + 1 < nx; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      f.comp[1][k] = 0.5 * (b.comp[1][k] + b.comp[1][k + nx]);
    }
  }
  return f;
}

FaceField log_gradient_faces(std::span<const double> w, const Grid& g, double scale) {
  FaceField f = FaceField::zeros(g);
  const int nx = g.nx;
  const double c = scale / g.dx();
  Slice lw(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) lw[k] = std::log(w[k]);
  const int rows = g.dim == 1 ? 1 : nx;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      f.comp[0][static_cast<std::size_t>(j) * (nx - 1) + i] = c * (lw[k + 1] - lw[k]);
    }
  }
  if (g.dim == 2) {
    for (int j = 0; j + 1 < nx; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        f.comp[1][k] = c * (lw[k + nx] - lw[k]);
      }
    }
  }
  return f;
}

double integrate_time(std::span<const double> series, const Grid& g) {
  if (series.size() < 2) return 0.0;
  double acc = 0.5 * (series.front() + series.back());
  for (std::size_t n = 1; n + 1 < series.size(); ++n) acc += series[n];
  return acc * g.dt();
}

}  // namespace mfg
