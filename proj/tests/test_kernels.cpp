#include <doctest.h>

#include <random>

#include <omp.h>

#include "mfg/kernels.hpp"

using namespace mfg;

namespace {

Slice random_slice(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Slice s(n);
  for (double& v : s) v = d(rng);
  return s;
}

}  // namespace

TEST_CASE("serial and OpenMP kernels agree node for node") {
  std::mt19937_64 rng(11);
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 3.0, dim == 1 ? 4097 : 129, 1, 1.0);
    const auto u = random_slice(g.nodes(), rng);
    const auto mu = random_slice(g.nodes(), rng, 0.0, 1.0);
    Slice a(g.nodes()), b(g.nodes());

    kernels::serial::laplacian(g, u, a);
    kernels::omp::laplacian(g, u, b);
    CHECK(a == b);

    for (int axis = 0; axis < dim; ++axis) {
      kernels::serial::gradient(g, axis, u, a);
      kernels::omp::gradient(g, axis, u, b);
      CHECK(a == b);
    }

    FaceField f = FaceField::zeros(g);
    for (int axis = 0; axis < dim; ++axis) f.comp[axis] = random_slice(face_count(g, axis), rng, -20.0, 20.0);
    kernels::serial::drift_divergence(g, f, mu, a);
    kernels::omp::drift_divergence(g, f, mu, b);
    CHECK(a == b);

    const auto w = random_slice(g.nodes(), rng, 0.0, 1.0);
    CHECK(kernels::omp::weighted_sum(u, w) ==
          doctest::Approx(kernels::serial::weighted_sum(u, w)).epsilon(1e-12));
  }
}

TEST_CASE("batched Thomas solves match between backends and solve the system") {
  std::mt19937_64 rng(3);
  const int lines = 17, n = 33;
  const std::size_t size = static_cast<std::size_t>(lines) * n;
  auto sub = random_slice(size, rng), sup = random_slice(size, rng);
  auto diag = random_slice(size, rng, 3.0, 4.0);
  const auto rhs = random_slice(size, rng);
  Slice x1 = rhs, x2 = rhs;
  kernels::serial::thomas_batch(lines, n, sub, diag, sup, x1);
  kernels::omp::thomas_batch(lines, n, sub, diag, sup, x2);
  CHECK(x1 == x2);
  for (int l = 0; l < lines; ++l) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(l) * n + i;
      double r = diag[k] * x1[k];
      if (i > 0) r += sub[k] * x1[k - 1];
      if (i + 1 < n) r += sup[k] * x1[k + 1];
      CHECK(r == doctest::Approx(rhs[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("OpenMP weighted sum does not depend on the thread count") {
  std::mt19937_64 rng(5);
  const auto v = random_slice(100003, rng);
  const auto w = random_slice(100003, rng);
  const double reference = kernels::omp::weighted_sum(v, w);
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(kernels::omp::weighted_sum(v, w) == reference);
  }
}

TEST_CASE("Bernoulli weight") {
  CHECK(kernels::bernoulli(0.0) == 1.0);
  CHECK(kernels::bernoulli(1e-9) == doctest::Approx(1.0 - 0.5e-9));
  CHECK(kernels::bernoulli(1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)));
  // B(-z) - B(z) = z
  for (double z : {1e-6, 0.3, 5.0, 40.0}) CHECK(kernels::bernoulli(-z) - kernels::bernoulli(z) == doctest::Approx(z));
  CHECK(kernels::bernoulli(800.0) >= 0.0);
}
