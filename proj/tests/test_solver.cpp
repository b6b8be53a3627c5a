#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/diagnostics.hpp"
#include "mfg/errors.hpp"
#include "mfg/heat_kernel.hpp"
#include "mfg/solver.hpp"
#include "support.hpp"

using namespace mfg;

namespace {

ProblemSpec gaussian_problem(double sigma, double T) {
  ProblemSpec p;
  p.horizon = T;
  p.coupling = {sigma, 2.0};
  return p;
}

SpaceTimeField random_smooth(const Grid& g, unsigned seed, double amplitude) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double a = coef(rng), b = coef(rng), c = coef(rng);
  SpaceTimeField u(g);
  for (int n = 0; n < g.time_nodes(); ++n)
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      const double x = g.point(k)[0], t = g.time(n);
      u.at(n, k) = amplitude * (a * std::sin(x + t) + b * std::cos(0.5 * x) * t + c * std::tanh(x - t)) / 3.0;
    }
  return u;
}

}  // namespace

TEST_CASE("hopf-cole: constants and roundtrip") {
  const Grid g = Grid::make(1, 5.0, 101, 20, 1.0);
  SpaceTimeField zero(g, 0.0);
  const auto one = hopf_cole(zero);
  for (double v : one.values()) CHECK(v == 1.0);

  SpaceTimeField c(g, 3.7);
  const auto wc = hopf_cole(c);
  const auto back = inverse_hopf_cole(wc);
  for (double v : wc.values()) CHECK(v == doctest::Approx(std::exp(-1.85)).epsilon(1e-15));
  for (double v : back.values()) CHECK(v == doctest::Approx(3.7).epsilon(1e-15));

  for (unsigned seed : {1u, 2u, 3u}) {
    const auto u = random_smooth(g, seed, 10.0);
    CHECK(u.max() <= 10.0);
    CHECK(u.min() >= -10.0);
    CHECK(testing_support::max_abs_diff(inverse_hopf_cole(hopf_cole(u)).values(), u.values()) < 1e-12);
  }

  SpaceTimeField bad(g, 1.0);
  bad.at(3, 7) = 0.0;
  CHECK_THROWS_AS(inverse_hopf_cole(bad), DomainError);
}

TEST_CASE("picard map: sigma = 0 is constant and equals the heat flow") {
  const ProblemSpec p = gaussian_problem(0.0, 1.0);
  const Grid g = Grid::make(1, 10.0, 201, 100, 1.0);
  const PicardMap map(p, g);
  const auto start = map.heat_flow();
  const auto a = map(start);
  const auto b = map(a.mu);
  CHECK(testing_support::max_abs_diff(a.mu.values(), b.mu.values()) == 0.0);
  CHECK(testing_support::max_abs_diff(a.mu.values(), start.values()) < 1e-14);
  for (double v : a.w.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("picard map: every image has unit mass and is nonnegative") {
  const ProblemSpec p = gaussian_problem(4.0, 1.0);
  const Grid g = Grid::make(1, 10.0, 201, 100, 1.0);
  const PicardMap map(p, g);
  auto m = map.heat_flow();
  for (int it = 0; it < 3; ++it) {
    m = map(m).mu;
    CHECK(m.min() >= 0.0);
    for (int n = 0; n < g.time_nodes(); ++n) {
      double mass = 0.0;
      for (std::size_t k = 0; k < g.nodes(); ++k) mass += g.weight(k) * m.at(n, k);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve: sigma = 0 converges immediately") {
  for (int dim : {1, 2}) {
    ProblemSpec p = gaussian_problem(0.0, 1.0);
    p.dim = dim;
    const auto out = solve(p, Grid::make(dim, 8.0, dim == 1 ? 201 : 65, 100, 1.0), SolverConfig{});
    CHECK(out.verdict == Verdict::Converged);
    CHECK(out.iterations <= 2);
    CHECK(out.hjb_residual <= 1e-10);
    // Lie splitting differs from the unsplit implicit step by dt^2 dxx dyy.
    CHECK(out.fp_residual <= (dim == 1 ? 1e-10 : 1e-2));
  }
}

TEST_CASE("solve: weak aggregation golden run") {
  SolverConfig cfg;
  cfg.tol = 1e-10;
  const auto out = solve(gaussian_problem(0.05, 1.0), Grid::make(1, 12.0, 257, 500, 1.0), cfg);
  REQUIRE(out.verdict == Verdict::Converged);
  CHECK(out.iterations == 4);  // frozen from a tightened-tolerance run
  REQUIRE(out.residual_history.size() >= 3);
  for (std::size_t k = 3; k < out.residual_history.size(); ++k)
    CHECK(out.residual_history[k] < out.residual_history[k - 1]);
  CHECK(out.residual_history.back() <= cfg.tol);
  CHECK(out.hjb_residual < 1e-3);
  CHECK(out.fp_residual < 1e-3);
  CHECK(out.reconstruction_residual < 1e-3);
}

TEST_CASE("solve: damping changes the path, not the fixed point") {
  const ProblemSpec p = gaussian_problem(2.0, 1.0);
  const Grid g = Grid::make(1, 10.0, 129, 100, 1.0);
  SolverConfig full, half;
  full.tol = half.tol = 1e-10;
  half.damping = 0.5;
  const auto a = solve(p, g, full);
  const auto b = solve(p, g, half);
  REQUIRE(a.verdict == Verdict::Converged);
  REQUIRE(b.verdict == Verdict::Converged);
  CHECK(b.iterations > a.iterations);
  CHECK(relative_l1(a.m, b.m) <= 10.0 * full.tol);
}

TEST_CASE("solve: no convergence beyond a certified horizon") {
  // e0 = -1/2 + sigma/(6 pi sqrt 3) >= 1 for sigma = 50.
  ProblemSpec p = gaussian_problem(50.0, 1.0);
  const Grid probe = Grid::make(1, 12.0, 257, 100, 1.0);
  const auto cert = compute_nonexistence_certificate(p, probe);
  REQUIRE(cert.e0 >= 1.0);
  REQUIRE(cert.T_star);
  p.horizon = 2.0 * *cert.T_star;
  const auto out = solve(p, Grid::make(1, 12.0, 257, 500, p.horizon), SolverConfig{});
  CHECK(out.verdict != Verdict::Converged);
  CHECK_FALSE(out.reason.empty());
}

TEST_CASE("solve: configuration errors throw, numerical trouble does not") {
  SolverConfig bad;
  bad.damping = 0.0;
  bad.tol = -1.0;
  try {
    bad.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.keys() == std::vector<std::string>{"damping", "tol"});
  }
  CHECK_THROWS_AS(solve(gaussian_problem(0.0, 1.0), Grid::make(2, 5.0, 21, 10, 1.0), SolverConfig{}), ConfigError);

  SolverConfig capped;
  capped.divergence_cap = 1e-6;
  const auto out = solve(gaussian_problem(1.0, 1.0), Grid::make(1, 10.0, 101, 50, 1.0), capped);
  CHECK(out.verdict == Verdict::Diverged);
}

TEST_CASE("self-consistency residual") {
  const ProblemSpec p = gaussian_problem(0.0, 1.0);
  const Grid g = Grid::make(1, 10.0, 201, 200, 1.0);
  const auto out = solve(p, g, SolverConfig{});
  REQUIRE(out.verdict == Verdict::Converged);
  const auto r = self_consistency_residual(SpaceTimeField(g, 0.0), out.m, p, g);
  CHECK(r.hjb <= 1e-10);
  CHECK(r.fp <= 1e-10);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SpaceTimeField u(g), m(g);
  for (auto& v : u.values()) v = unif(rng);
  for (auto& v : m.values()) v = unif(rng);
  const auto rr = self_consistency_residual(u, m, gaussian_problem(1.0, 1.0), g);
  CHECK(rr.hjb > 0.0);
  CHECK(rr.fp > 0.0);
}

TEST_CASE("self-consistency residual shrinks with dt") {
  const ProblemSpec p = gaussian_problem(1.0, 1.0);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  auto residual = [&](int nt) {
    const auto out = solve(p, Grid::make(1, 10.0, 1025, nt, 1.0), cfg);
    REQUIRE(out.verdict == Verdict::Converged);
    return out.hjb_residual + out.fp_residual;
  };
  const double r1 = residual(50), r2 = residual(100), r3 = residual(200);
  CHECK(r2 < r1);
  CHECK(r3 < r2);
  CHECK(testing_support::slope(r2, r3) > 0.8);
}
