#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mfg/errors.hpp"
#include "mfg/operators.hpp"
#include "support.hpp"

using namespace mfg;
using testing_support::gaussian;
using testing_support::sample;

TEST_CASE("grid validation names the offending field") {
  CHECK_THROWS_AS(Grid::make(1, 12.0, 256, 10, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::make(3, 12.0, 33, 10, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::make(1, -1.0, 33, 10, 1.0), ConfigError);
  try {
    Grid::make(1, 12.0, 1, 10, 1.0);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.keys().size() == 1);
    CHECK(e.keys()[0] == "nx");
  }
  const Grid g = Grid::make(1, 12.0, 257, 100, 1.0);
  CHECK(g.coord(128) == 0.0);
  CHECK(g.dx() == doctest::Approx(24.0 / 256));
  CHECK(g.refined().nx == 513);
  CHECK(g.refined().nt == 200);
}

TEST_CASE("laplacian is exact on quadratics and zero on constants") {
  const Grid g = Grid::make(1, 3.0, 31, 1, 1.0);
  const auto q = sample(g, [](Point p) { return p[0] * p[0]; });
  const auto lap = laplacian(q, g);
  for (int i = 1; i + 1 < g.nx; ++i) CHECK(lap[i] == doctest::Approx(2.0).epsilon(1e-12));
  const auto c = laplacian(Slice(g.nodes(), 4.5), g);
  for (double v : c) CHECK(v == 0.0);

  const Grid g2 = Grid::make(2, 3.0, 31, 1, 1.0);
  const auto q2 = sample(g2, [](Point p) { return p[0] * p[0] + 3.0 * p[1] * p[1]; });
  const auto lap2 = laplacian(q2, g2);
  for (std::size_t k = 0; k < g2.nodes(); ++k)
    if (!g2.on_boundary(k)) CHECK(lap2[k] == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("laplacian of the sine eigenfunction converges at second order") {
  const double L = 4.0;
  auto err = [&](int nx) {
    const Grid g = Grid::make(1, L, nx, 1, 1.0);
    const double k = std::numbers::pi / L;
    const auto u = sample(g, [&](Point p) { return std::sin(k * p[0]); });
    const auto lap = laplacian(u, g);
    double e = 0.0;
    for (int i = 1; i + 1 < nx; ++i) e = std::max(e, std::abs(lap[i] + k * k * u[i]));
    return e;
  };
  const double e1 = err(65), e2 = err(129), e3 = err(257);
  CHECK(testing_support::slope(e1, e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(testing_support::slope(e2, e3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gradient is exact on affine fields and second order on a Gaussian") {
  const Grid g = Grid::make(1, 5.0, 41, 1, 1.0);
  const auto lin = gradient(sample(g, [](Point p) { return 3.0 * p[0] - 1.0; }), g);
  for (double v : lin.comp[0]) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  const auto zero = gradient(Slice(g.nodes(), 2.0), g);
  for (double v : zero.comp[0]) CHECK(v == 0.0);

  auto err = [](int nx) {
    const Grid g = Grid::make(1, 6.0, nx, 1, 1.0);
    const auto u = sample(g, [](Point p) { return std::exp(-0.5 * p[0] * p[0]); });
    const auto du = gradient(u, g);
    double e = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      const double x = g.point(k)[0];
      e = std::max(e, std::abs(du.comp[0][k] + x * std::exp(-0.5 * x * x)));
    }
    return e;
  };
  const double e1 = err(65), e2 = err(129), e3 = err(257);
  CHECK(testing_support::slope(e1, e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(testing_support::slope(e2, e3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("trapezoid moments of the standard Gaussian") {
  const Grid g = Grid::make(1, 10.0, 8001, 1, 1.0);
  const auto m = sample(g, [](Point p) { return gaussian(p[0], 0.0, 1.0); });
  CHECK(std::abs(integrate(m, g) - 1.0) < 1e-12);
  CHECK(std::abs(integrate(m, g, Weight::X2) - 1.0) < 1e-6);
  CHECK(std::abs(integrate(m, g, Weight::AbsX) - std::sqrt(2.0 / std::numbers::pi)) < 1e-6);

  // Linearity and monotonicity.
  const auto m2 = sample(g, [](Point p) { return gaussian(p[0], 1.0, 2.0); });
  Slice sum(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) sum[k] = 2.0 * m[k] + 3.0 * m2[k];
  CHECK(integrate(sum, g, Weight::X2) ==
        doctest::Approx(2.0 * integrate(m, g, Weight::X2) + 3.0 * integrate(m2, g, Weight::X2)).epsilon(1e-13));
  CHECK(integrate(m2, g, Weight::X2) > integrate(m2, g, Weight::AbsX) - 10.0);
}

TEST_CASE("flux divergence is conservative for arbitrary drift and density") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> drift(-30.0, 30.0), dens(0.0, 1.0);
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 2.0, 21, 1, 1.0);
    FaceField b = FaceField::zeros(g);
    for (int a = 0; a < dim; ++a)
      for (double& v : b.comp[a]) v = drift(rng);
    Slice mu(g.nodes());
    for (double& v : mu) v = dens(rng);
    const auto div = flux_divergence(b, mu, g);
    double scale = 0.0;
    for (double v : div) scale = std::max(scale, std::abs(v));
    CHECK(std::abs(integrate(div, g)) <= 1e-13 * scale);
  }
  const Grid g = Grid::make(1, 2.0, 21, 1, 1.0);
  const auto zero = flux_divergence(FaceField::zeros(g), Slice(g.nodes(), 1.0), g);
  for (double v : zero) CHECK(v == 0.0);
}

// The fitted flux differs from the centred one by b^2 dx^2 mu' / 12, so the
// error is second order, better than the first order the fitting guarantees.
TEST_CASE("flux divergence with constant drift approaches b mu' as dx -> 0") {
  const double b = 1.5;
  auto err = [&](int nx) {
    const Grid g = Grid::make(1, 8.0, nx, 1, 1.0);
    FaceField f = FaceField::zeros(g);
    for (double& v : f.comp[0]) v = b;
    const auto mu = sample(g, [](Point p) { return gaussian(p[0], 0.0, 1.0); });
    const auto div = flux_divergence(f, mu, g);
    double e = 0.0;
    for (int i = 1; i + 1 < nx; ++i) {
      const double x = g.coord(i);
      e = std::max(e, std::abs(div[i] - b * (-x) * gaussian(x, 0.0, 1.0)));
    }
    return e;
  };
  const double e1 = err(129), e2 = err(257), e3 = err(513);
  CHECK(testing_support::slope(e1, e2) >= 0.9);
  CHECK(testing_support::slope(e2, e3) >= 0.9);
  CHECK(e3 < 1e-3);
}

TEST_CASE("log-gradient faces and time quadrature") {
  const Grid g = Grid::make(1, 2.0, 5, 4, 2.0);
  const auto w = sample(g, [](Point p) { return std::exp(3.0 * p[0]); });
  const auto f = log_gradient_faces(w, g, 2.0);
  for (double v : f.comp[0]) CHECK(v == doctest::Approx(6.0).epsilon(1e-12));
  const std::vector<double> series{0.0, 0.5, 1.0, 1.5, 2.0};
  CHECK(integrate_time(series, g) == doctest::Approx(2.0).epsilon(1e-14));
}
