#include "mfg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfg/operators.hpp"
#include "mfg/solver.hpp"

namespace mfg {

namespace {

// h' and h'' from the h series: centred inside, one-sided at the ends.
void differentiate(const std::vector<double>& h, double dt, std::vector<double>& dh, std::vector<double>& d2h) {
  const std::size_t n = h.size();
  dh.assign(n, 0.0);
  d2h.assign(n, 0.0);
  if (n < 3) return;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    dh[i] = (h[i + 1] - h[i - 1]) / (2.0 * dt);
    d2h[i] = (h[i + 1] - 2.0 * h[i] + h[i - 1]) / (dt * dt);
  }
  dh[0] = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * dt);
  dh[n - 1] = (3.0 * h[n - 1] - 4.0 * h[n - 2] + h[n - 3]) / (2.0 * dt);
  d2h[0] = d2h[1];
  d2h[n - 1] = d2h[n - 2];
}

double interior_l1(const std::vector<double>& a, const std::vector<double>& b, double dt) {
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) acc += dt * std::abs(a[i] - b[i]);
  return acc;
}

}  // namespace

EnergyReport compute_energy(const SpaceTimeField& u, const SpaceTimeField& m, const ProblemSpec& p) {
  const Grid& g = m.grid();
  const SampledData data = sample_on_grid(p, g);
  const auto weights = g.weights();
  const int nt1 = g.time_nodes();
  EnergyReport r;
  auto& c = r.components;
  c.transport.resize(nt1);
  c.kinetic.resize(nt1);
  c.coupling.resize(nt1);
  c.potential.resize(nt1);
  r.E.resize(nt1);
  for (int n = 0; n < nt1; ++n) {
    const auto un = u.slice(n);
    const auto mn = m.slice(n);
    const VectorField gu = gradient(un, g);
    const VectorField gm = gradient(mn, g);
    double transport = 0.0, kinetic = 0.0, coupling = 0.0, potential = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      double dot = 0.0, sq = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        dot += gu.comp[a][k] * gm.comp[a][k];
        sq += gu.comp[a][k] * gu.comp[a][k];
      }
      const double mk = std::max(mn[k], 0.0);
      transport += weights[k] * dot;
      kinetic += weights[k] * 0.5 * sq * mk;
      coupling += weights[k] * eval_coupling(p.coupling, mk).F;
      potential += weights[k] * data.V[k] * mk;
    }
    c.transport[n] = transport;
    c.kinetic[n] = kinetic;
    c.coupling[n] = coupling;
    c.potential[n] = potential;
    r.E[n] = transport + kinetic + coupling - potential;
  }
  for (double e : r.E) r.drift = std::max(r.drift, std::abs(e - r.E[0]));
  return r;
}

MomentReport check_moment_identity(const SpaceTimeField& u, const SpaceTimeField& m, const ProblemSpec& p) {
  const Grid& g = m.grid();
  const SampledData data = sample_on_grid(p, g);
  const EnergyReport energy = compute_energy(u, m, p);
  const auto weights = g.weights();
  const int nt1 = g.time_nodes();
  const double N = g.dim;
  const double tail_edge = 0.9 * g.half_width;

  MomentReport r;
  r.mass.resize(nt1);
  r.tail_mass.resize(nt1);
  r.absmoment.resize(nt1);
  r.h.resize(nt1);
  r.rhs1.resize(nt1);
  r.rhs2.resize(nt1);
  std::vector<double> drift_moment(nt1);
  for (int n = 0; n < nt1; ++n) {
    const auto mn = m.slice(n);
    const VectorField gu = gradient(u.slice(n), g);
    double mass = 0.0, tail = 0.0, absm = 0.0, h = 0.0, dm = 0.0, fm = 0.0, Fm = 0.0, Vm = 0.0, gVx = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      const Point x = g.point(k);
      const double w = weights[k];
      const double mk = std::max(mn[k], 0.0);
      const double r2 = x[0] * x[0] + x[1] * x[1];
      double grad_u_x = 0.0, grad_V_x = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        grad_u_x += gu.comp[a][k] * x[a];
        grad_V_x += data.grad_V.comp[a][k] * x[a];
      }
      const auto cv = eval_coupling(p.coupling, mk);
      mass += w * mn[k];
      if (std::max(std::abs(x[0]), std::abs(x[1])) >= tail_edge) tail += w * mn[k];
      absm += w * std::sqrt(r2) * mn[k];
      h += w * r2 * mn[k];
      dm += w * mk * grad_u_x;
      fm += w * cv.f * mk;
      Fm += w * cv.F;
      Vm += w * data.V[k] * mk;
      gVx += w * grad_V_x * mk;
    }
    r.mass[n] = mass;
    r.tail_mass[n] = tail;
    r.absmoment[n] = absm;
    r.h[n] = h;
    drift_moment[n] = dm;
    r.rhs2[n] = 4.0 * energy.E[n] + 2.0 * N * fm - 2.0 * (N + 2.0) * Fm + 4.0 * Vm + 2.0 * gVx;
  }
  for (int n = 0; n < nt1; ++n) r.rhs1[n] = 2.0 * N * r.mass[0] - 2.0 * drift_moment[n];

  differentiate(r.h, g.dt(), r.dh, r.d2h);
  r.r1 = interior_l1(r.dh, r.rhs1, g.dt());
  r.r2 = interior_l1(r.d2h, r.rhs2, g.dt());
  r.min_d2h = std::numeric_limits<double>::infinity();
  for (int n = 1; n + 1 < nt1; ++n) r.min_d2h = std::min(r.min_d2h, r.d2h[n]);
  return r;
}

double compute_e0(const ProblemSpec& p, const Grid& g) {
  const SampledData data = sample_on_grid(p, g);
  const auto weights = g.weights();
  const double inf_V = *std::min_element(data.V.begin(), data.V.end());
  double fisher = 0.0, coupling = 0.0, potential = 0.0;
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    const double m0 = data.m0[k];
    if (m0 < 1e-300) continue;
    double grad2 = 0.0;
    for (int a = 0; a < g.dim; ++a) grad2 += data.grad_m0.comp[a][k] * data.grad_m0.comp[a][k];
    fisher += weights[k] * grad2 / m0;
    coupling += weights[k] * eval_coupling(p.coupling, m0).F;
    potential += weights[k] * (data.V[k] - inf_V) * m0;
  }
  return -0.5 * fisher + coupling - potential;
}

double nonexistence_horizon(double e0, double h0, int dim) {
  return dim / (2.0 * e0) + std::sqrt(h0 / (2.0 * e0));
}

double planning_horizon(double e0, double h0, double hT) { return std::sqrt(2.0 * std::max(h0, hT) / e0); }

namespace {

double shifted_second_moment(const Slice& m0, const Grid& g, const Point& y) {
  const auto weights = g.weights();
  double acc = 0.0;
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    const Point x = g.point(k);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += (x[a] - y[a]) * (x[a] - y[a]);
    acc += weights[k] * r2 * m0[k];
  }
  return acc;
}

struct ShiftSearch {
  const ProblemSpec& p;
  const Grid& g;
  const Slice& m0;
  const ConditionReport& base;

  bool feasible(const Point& y) const {
    const auto r = check_translated_conditions(p, g, y, base);
    return r.potential.holds && r.terminal.holds;
  }
  double objective(const Point& y) const {
    return feasible(y) ? shifted_second_moment(m0, g, y) : std::numeric_limits<double>::infinity();
  }

  // Coarse lattice over the inner half of the box, then golden section
  // along each axis inside one coarse cell around the best candidate.
  std::optional<Point> run() const {
    constexpr int kCoarse = 41;
    const double span = 0.5 * g.half_width;
    const double step = 2.0 * span / (kCoarse - 1);
    std::optional<Point> best;
    double best_value = std::numeric_limits<double>::infinity();
    const int ny = g.dim == 2 ? kCoarse : 1;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < kCoarse; ++i) {
        const Point y{-span + i * step, g.dim == 2 ? -span + j * step : 0.0};
        const double v = objective(y);
        if (v < best_value) {
          best_value = v;
          best = y;
        }
      }
    }
    if (!best) return std::nullopt;
    Point y = *best;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int axis = 0; axis < g.dim; ++axis) {
      double lo = y[axis] - step, hi = y[axis] + step;
      const auto at = [&](double v) {
        Point z = y;
        z[axis] = v;
        return objective(z);
      };
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = at(x1), f2 = at(x2);
      while (hi - lo > 1e-10 * std::max(1.0, g.half_width)) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = at(x2);
        }
      }
      const double candidate = 0.5 * (lo + hi);
      if (at(candidate) <= objective(y)) y[axis] = candidate;
    }
    return y;
  }
};

}  // namespace

Certificate compute_nonexistence_certificate(const ProblemSpec& p, const Grid& g, bool optimize_shift) {
  const SampledData data = sample_on_grid(p, g);
  Certificate c;
  c.e0 = compute_e0(p, g);
  c.conditions = check_structural_conditions(p, g);
  c.h0 = shifted_second_moment(data.m0, g, {0.0, 0.0});
  if (optimize_shift) {
    const ShiftSearch search{p, g, data.m0, c.conditions};
    if (const auto y = search.run()) {
      const double h = shifted_second_moment(data.m0, g, *y);
      const auto translated = check_translated_conditions(p, g, *y, c.conditions);
      if (h < c.h0 || !c.conditions.all()) {
        c.h0 = h;
        c.shift = *y;
        c.conditions = translated;
        c.shift_optimized = true;
      }
    }
  }
  if (c.e0 > 0.0 && c.conditions.all()) c.T_star = nonexistence_horizon(c.e0, c.h0, g.dim);
  return c;
}

Certificate compute_planning_certificate(const std::vector<GaussianComponent>& mT, const ProblemSpec& p,
                                         const Grid& g) {
  ProblemSpec base = p;
  base.data.uT = TerminalSpec{};
  ProblemSpec target = base;
  target.data.m0 = mT;

  Certificate c;
  c.e0 = compute_e0(base, g);
  c.conditions = check_structural_conditions(base, g);
  const auto target_conditions = check_structural_conditions(target, g);
  if (target_conditions.density.margin < c.conditions.density.margin) c.conditions.density = target_conditions.density;
  c.h0 = shifted_second_moment(sample_on_grid(base, g).m0, g, {0.0, 0.0});
  c.hT = shifted_second_moment(sample_on_grid(target, g).m0, g, {0.0, 0.0});
  if (c.e0 > 0.0 && c.conditions.all()) c.T_hat_planning = planning_horizon(c.e0, c.h0, c.hT);
  return c;
}

AprioriReport apriori_exponents(const ProblemSpec& p, double D) {
  const double alpha = p.coupling.alpha;
  const double N = p.dim;
  AprioriReport r;
  r.D = D;
  r.two_over_q = (alpha + 1.0) / (2.0 * alpha + 1.0);
  r.q = 2.0 / r.two_over_q;
  r.delta = 4.0 / r.q;
  r.beta = alpha * N / 2.0;
  r.theta = (1.0 - 1.0 / r.beta) * (alpha + 1.0) / alpha;
  r.m_exponent = N * alpha / (alpha + 1.0);
  r.a = 2.0 * r.theta * r.beta / (r.m_exponent * (alpha + 1.0));
  return r;
}

AprioriReport compute_apriori(const SpaceTimeField& mu, const ProblemSpec& p) {
  return apriori_exponents(p, space_time_power(mu, 2.0 * p.coupling.alpha + 1.0));
}

}  // namespace mfg
