#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "mfg/errors.hpp"
#include "mfg/operators.hpp"
#include "mfg/problem.hpp"

using namespace mfg;

TEST_CASE("power-law coupling values") {
  auto v = eval_coupling({1.0, 2.0}, 2.0);
  CHECK(v.f == 4.0);
  CHECK(v.F == doctest::Approx(8.0 / 3.0));
  CHECK(v.f_prime == 4.0);
  v = eval_coupling({3.0, 2.0}, 0.0);
  CHECK(v.f == 0.0);
  CHECK(v.F == 0.0);
  CHECK(v.f_prime == 0.0);
  v = eval_coupling({2.0, 3.0}, 1.0);
  CHECK(v.f == 2.0);
  CHECK(v.F == 0.5);
  CHECK(v.f_prime == 6.0);
  CHECK_THROWS_AS(eval_coupling({1.0, 2.0}, -1e-3), DomainError);
}

TEST_CASE("F is the antiderivative of f") {
  for (double alpha : {0.5, 1.0, 2.0, 3.7}) {
    const CouplingSpec c{1.3, alpha};
    for (double m : {1e-3, 0.4, 1.0, 7.5}) {
      const double quad = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double s) { return eval_coupling(c, s).f; }, 0.0, m, 10, 1e-14);
      CHECK(eval_coupling(c, m).F == doctest::Approx(quad).epsilon(1e-8));
    }
  }
}

TEST_CASE("coupling condition margin has the sign of alpha - 2/N") {
  const Grid g1 = Grid::make(1, 6.0, 33, 1, 1.0);
  const Grid g2 = Grid::make(2, 6.0, 17, 1, 1.0);
  for (int N : {1, 2}) {
    for (double alpha : {0.5, 0.9, 1.0, 1.5, 2.0, 3.0}) {
      ProblemSpec p;
      p.dim = N;
      p.coupling = {2.0, alpha};
      const auto r = check_structural_conditions(p, N == 1 ? g1 : g2);
      const double sign_expected = alpha - 2.0 / N;
      if (std::abs(sign_expected) < 1e-12) {
        CHECK(r.coupling.margin == doctest::Approx(0.0));
        CHECK(r.coupling.holds);
      } else {
        CHECK((r.coupling.margin > 0) == (sign_expected > 0));
        CHECK(r.coupling.holds == (sign_expected > 0));
      }
    }
  }
}

TEST_CASE("zero potential and log terminal cost satisfy their conditions") {
  ProblemSpec p;
  p.coupling = {1.0, 2.0};
  p.data.uT = {TerminalFamily::Log, 1.0, 1.0, {0.0, 0.0}};
  const Grid g = Grid::make(1, 12.0, 257, 1, 1.0);
  const auto r = check_structural_conditions(p, g);
  CHECK(r.coupling.holds);
  CHECK(r.coupling.margin == doctest::Approx(0.0));
  CHECK(r.potential.holds);
  CHECK(r.potential.margin == 0.0);
  CHECK(r.terminal.holds);
  CHECK(r.terminal.margin >= 0.0);
  CHECK(r.density.holds);

  // grad u_T . x = 2x^2/(1+x^2) at every node
  const auto d = sample_on_grid(p, g);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.coord(i);
    CHECK(d.grad_uT.comp[0][i] * x == doctest::Approx(2.0 * x * x / (1.0 + x * x)).epsilon(1e-13));
  }

  // Off-centre log cost violates the condition.
  p.data.uT.center = {2.0, 0.0};
  CHECK_FALSE(check_structural_conditions(p, g).terminal.holds);
}

TEST_CASE("potential families") {
  const Grid g = Grid::make(1, 6.0, 121, 1, 1.0);
  ProblemSpec p;
  p.potential = {PotentialFamily::GaussianWell, 0.0, 1.0, {0.0, 0.0}, 0.0, 1.0, {}};
  for (double v : sample_on_grid(p, g).V) CHECK(v == 0.0);

  // Gaussian well: 2(V - inf V) + V'x = -2A e (1 - 1 - r^2/2w^2)... nonnegative.
  p.potential.amplitude = 1.5;
  const auto r = check_structural_conditions(p, g);
  CHECK(r.potential.holds);

  // Closed-form derivatives against finite differences.
  for (auto fam : {PotentialFamily::GaussianWell, PotentialFamily::CosineBump}) {
    PotentialSpec s{fam, 1.2, 1.7, {0.3, -0.2}, 0.0, 1.0, {}};
    for (int dim : {1, 2}) {
      Potential V(s, dim);
      const double h = 1e-4;
      for (Point x : {Point{0.1, 0.7}, Point{-0.9, 0.2}, Point{1.1, -0.4}}) {
        const auto v = V(x);
        double lap = 0.0;
        for (int a = 0; a < dim; ++a) {
          Point xp = x, xm = x;
          xp[a] += h;
          xm[a] -= h;
          const double vp = V(xp).value, vm = V(xm).value;
          CHECK(v.grad[a] == doctest::Approx((vp - vm) / (2 * h)).epsilon(1e-6));
          lap += (vp - 2 * v.value + vm) / (h * h);
        }
        CHECK(v.laplacian == doctest::Approx(lap).epsilon(1e-4));
      }
    }
  }

  // User table through a quadratic reproduces it in the interior.
  PotentialSpec t{PotentialFamily::UserTable, 0.0, 1.0, {0.0, 0.0}, -4.0, 0.5, {}};
  for (int i = 0; i <= 16; ++i) {
    const double x = -4.0 + 0.5 * i;
    t.table_values.push_back(0.25 * x * x);
  }
  Potential V(t, 1);
  CHECK(V({1.3, 0.0}).value == doctest::Approx(0.25 * 1.69).epsilon(1e-3));
  CHECK(V({1.3, 0.0}).grad[0] == doctest::Approx(0.65).epsilon(1e-2));
  CHECK(V({9.0, 0.0}).value == V({4.0, 0.0}).value);
}

TEST_CASE("sampled data") {
  ProblemSpec p;
  const Grid g = Grid::make(1, 10.0, 201, 1, 1.0);
  const auto d = sample_on_grid(p, g);
  CHECK(std::abs(integrate(d.m0, g) - 1.0) < 1e-15);
  for (double v : d.uT) CHECK(v == 0.0);
  for (double v : d.grad_uT.comp[0]) CHECK(v == 0.0);

  // Truncated, unnormalized mixture is rescaled to unit trapezoid mass.
  p.data.m0 = {{2.0, {3.0, 0.0}, 1.0}, {1.0, {-1.0, 0.0}, 0.5}};
  const Grid small = Grid::make(1, 4.0, 81, 1, 1.0);
  const auto d2 = sample_on_grid(p, small);
  CHECK(d2.m0_raw_mass < 0.99);
  CHECK(std::abs(integrate(d2.m0, small) - 1.0) < 1e-15);
  CHECK_FALSE(check_structural_conditions(p, small).density.holds);

  const Grid g2 = Grid::make(2, 8.0, 65, 1, 1.0);
  ProblemSpec p2;
  p2.dim = 2;
  CHECK(std::abs(integrate(sample_on_grid(p2, g2).m0, g2) - 1.0) < 1e-14);
}

TEST_CASE("validation lists every invalid field") {
  ProblemSpec p;
  p.coupling = {-1.0, -2.0};
  p.horizon = 0.0;
  try {
    validate(p);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const auto& k = e.keys();
    CHECK(std::find(k.begin(), k.end(), "alpha") != k.end());
    CHECK(std::find(k.begin(), k.end(), "sigma") != k.end());
    CHECK(std::find(k.begin(), k.end(), "T") != k.end());
  }
  ProblemSpec ok;
  CHECK_NOTHROW(validate(ok));
}
