#include "mfg/problem.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <numbers>

#include "mfg/errors.hpp"
#include "mfg/operators.hpp"

namespace mfg {

CouplingValue eval_coupling(const CouplingSpec& c, double m) {
  if (!(m >= 0.0)) throw DomainError("coupling evaluated at negative density m = " + std::to_string(m));
  CouplingValue v;
  if (m == 0.0) {
    // f'(0) is infinite for alpha < 1; only report it where it is finite.
    v.f_prime = (c.alpha == 1.0) ? c.sigma : 0.0;
    return v;
  }
  const double pa = std::pow(m, c.alpha);
  v.f = c.sigma * pa;
  v.F = c.sigma * pa * m / (c.alpha + 1.0);
  v.f_prime = c.sigma * c.alpha * pa / m;
  return v;
}

void validate(const ProblemSpec& p) {
  std::vector<std::string> bad;
  if (p.dim != 1 && p.dim != 2) bad.emplace_back("dim");
  if (!(p.horizon > 0.0) || !std::isfinite(p.horizon)) bad.emplace_back("T");
  if (!(p.coupling.sigma >= 0.0) || !std::isfinite(p.coupling.sigma)) bad.emplace_back("sigma");
  if (!(p.coupling.alpha > 0.0) || !std::isfinite(p.coupling.alpha)) bad.emplace_back("alpha");

  const auto& V = p.potential;
  if (V.family != PotentialFamily::Zero && V.family != PotentialFamily::UserTable && !(V.width > 0.0))
    bad.emplace_back("potential_width");
  if (V.family == PotentialFamily::UserTable) {
    if (p.dim != 1) bad.emplace_back("potential");
    if (V.table_values.size() < 4) bad.emplace_back("potential_table_values");
    if (!(V.table_step > 0.0)) bad.emplace_back("potential_table_step");
  }

  if (p.data.m0.empty()) bad.emplace_back("m0_weights");
  double total = 0.0;
  for (const auto& c : p.data.m0) {
    if (!(c.weight >= 0.0)) bad.emplace_back("m0_weights");
    if (!(c.stddev > 0.0)) bad.emplace_back("m0_stddevs");
    total += c.weight;
  }
  if (!p.data.m0.empty() && !(total > 0.0)) bad.emplace_back("m0_weights");
  if (p.data.uT.family == TerminalFamily::Gaussian && !(p.data.uT.width > 0.0)) bad.emplace_back("uT_width");

  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    std::string msg = "invalid problem parameters:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
}

// ---------------------------------------------------------------------------
// Potential

struct Potential::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> s;
  double lo;
  double hi;
};

Potential::Potential(const PotentialSpec& spec, int dim) : spec_(spec), dim_(dim) {
  if (spec.family == PotentialFamily::UserTable) {
    const auto& v = spec.table_values;
    const double hi = spec.table_start + spec.table_step * static_cast<double>(v.size() - 1);
    spline_ = std::make_unique<Spline>(
        Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), spec.table_start,
                                                                           spec.table_step),
               spec.table_start, hi});
  }
}

Potential::~Potential() = default;
Potential::Potential(Potential&&) noexcept = default;
Potential& Potential::operator=(Potential&&) noexcept = default;

PotentialValue Potential::operator()(const Point& x) const {
  PotentialValue out;
  const double dx0 = x[0] - spec_.center[0];
  const double dx1 = dim_ == 2 ? x[1] - spec_.center[1] : 0.0;
  const double r2 = dx0 * dx0 + dx1 * dx1;
  const double A = spec_.amplitude;
  const double w = spec_.width;

  switch (spec_.family) {
    case PotentialFamily::Zero:
      break;
    case PotentialFamily::GaussianWell: {
      const double g = std::exp(-r2 / (2.0 * w * w));
      out.value = -A * g;
      out.grad = {A * dx0 / (w * w) * g, A * dx1 / (w * w) * g};
      out.laplacian = -A * (r2 / (w * w * w * w) - dim_ / (w * w)) * g;
      break;
    }
    case PotentialFamily::CosineBump: {
      const double r = std::sqrt(r2);
      if (r >= w) break;
      const double k = std::numbers::pi / w;
      const double s = 0.5 * (1.0 + std::cos(k * r));
      const double s1 = -0.5 * k * std::sin(k * r);
      const double s2 = -0.5 * k * k * std::cos(k * r);
      const double phi1 = 2.0 * s * s1;
      const double phi2 = 2.0 * s1 * s1 + 2.0 * s * s2;
      out.value = A * s * s;
      if (r < 1e-12) {
        out.laplacian = A * dim_ * (-k * k);
      } else {
        out.grad = {A * phi1 * dx0 / r, A * phi1 * dx1 / r};
        out.laplacian = A * (phi2 + (dim_ - 1) * phi1 / r);
      }
      break;
    }
    case PotentialFamily::UserTable: {
      const double t = x[0];
      if (t <= spline_->lo) {
        out.value = spline_->s(spline_->lo);
      } else if (t >= spline_->hi) {
        out.value = spline_->s(spline_->hi);
      } else {
        out.value = spline_->s(t);
        out.grad = {spline_->s.prime(t), 0.0};
        out.laplacian = spline_->s.double_prime(t);
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Data

DensityValue eval_density(std::span<const GaussianComponent> mixture, int dim, const Point& x) {
  double total = 0.0;
  for (const auto& c : mixture) total += c.weight;
  DensityValue out;
  for (const auto& c : mixture) {
    const double s2 = c.stddev * c.stddev;
    const double d0 = x[0] - c.mean[0];
    const double d1 = dim == 2 ? x[1] - c.mean[1] : 0.0;
    const double norm = std::pow(2.0 * std::numbers::pi * s2, -0.5 * dim);
    const double g = c.weight / total * norm * std::exp(-(d0 * d0 + d1 * d1) / (2.0 * s2));
    out.value += g;
    out.grad[0] -= d0 / s2 * g;
    out.grad[1] -= d1 / s2 * g;
  }
  return out;
}

TerminalValue eval_terminal(const TerminalSpec& t, int dim, const Point& x) {
  TerminalValue out;
  const double d0 = x[0] - t.center[0];
  const double d1 = dim == 2 ? x[1] - t.center[1] : 0.0;
  const double r2 = d0 * d0 + d1 * d1;
  switch (t.family) {
    case TerminalFamily::Zero:
      break;
    case TerminalFamily::Log:
      out.value = t.scale * std::log1p(r2);
      out.grad = {2.0 * t.scale * d0 / (1.0 + r2), 2.0 * t.scale * d1 / (1.0 + r2)};
      break;
    case TerminalFamily::Gaussian: {
      const double w2 = t.width * t.width;
      const double g = std::exp(-r2 / (2.0 * w2));
      out.value = t.scale * (1.0 - g);
      out.grad = {t.scale * d0 / w2 * g, t.scale * d1 / w2 * g};
      break;
    }
  }
  return out;
}

SampledData sample_on_grid(const ProblemSpec& p, const Grid& g) {
  validate(p);
  const std::size_t n = g.nodes();
  const Potential V(p.potential, p.dim);
  SampledData d;
  d.m0.resize(n);
  d.uT.resize(n);
  d.V.resize(n);
  d.lap_V.resize(n);
  for (VectorField* v : {&d.grad_m0, &d.grad_uT, &d.grad_V}) {
    v->dim = g.dim;
    for (int a = 0; a < g.dim; ++a) v->comp[a].assign(n, 0.0);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Point x = g.point(k);
    const DensityValue m = eval_density(p.data.m0, p.dim, x);
    const TerminalValue u = eval_terminal(p.data.uT, p.dim, x);
    const PotentialValue v = V(x);
    d.m0[k] = m.value;
    d.uT[k] = u.value;
    d.V[k] = v.value;
    d.lap_V[k] = v.laplacian;
    for (int a = 0; a < g.dim; ++a) {
      d.grad_m0.comp[a][k] = m.grad[a];
      d.grad_uT.comp[a][k] = u.grad[a];
      d.grad_V.comp[a][k] = v.grad[a];
    }
  }
  d.m0_raw_mass = integrate(d.m0, g);
  const double scale = 1.0 / d.m0_raw_mass;
  for (auto& v : d.m0) v *= scale;
  for (int a = 0; a < g.dim; ++a)
    for (auto& v : d.grad_m0.comp[a]) v *= scale;
  return d;
}

// ---------------------------------------------------------------------------
// Structural conditions

namespace {

ConditionCheck coupling_check(const ProblemSpec& p) {
  const double N = p.dim;
  const double margin = p.coupling.sigma * (N - (N + 2.0) / (p.coupling.alpha + 1.0));
  return {margin >= -1e-12 * std::max(1.0, p.coupling.sigma), margin};
}

ConditionCheck density_check(const ProblemSpec& p, const Grid& g) {
  const SampledData d = sample_on_grid(p, g);
  const bool nonneg = std::all_of(p.data.m0.begin(), p.data.m0.end(), [](const auto& c) { return c.weight >= 0.0; });
  const double dev = std::abs(d.m0_raw_mass - 1.0);
  return {nonneg && dev <= kMassTolerance, -dev};
}

double potential_inf(const Potential& V, const Grid& g) {
  double inf = V(g.point(0)).value;
  for (std::size_t k = 1; k < g.nodes(); ++k) inf = std::min(inf, V(g.point(k)).value);
  return inf;
}

constexpr double kPointwiseTolerance = 1e-12;

ConditionReport translated(const ProblemSpec& p, const Grid& g, const Point& y, ConditionCheck coupling,
                           ConditionCheck density) {
  const Potential V(p.potential, p.dim);
  const double inf_v = potential_inf(V, g);
  double v_margin = INFINITY;
  double u_margin = INFINITY;
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    const Point x = g.point(k);
    const Point xs{x[0] + y[0], x[1] + y[1]};
    const PotentialValue v = V(xs);
    const TerminalValue u = eval_terminal(p.data.uT, p.dim, xs);
    double gv = 0.0;
    double gu = 0.0;
    for (int a = 0; a < p.dim; ++a) {
      gv += v.grad[a] * x[a];
      gu += u.grad[a] * x[a];
    }
    v_margin = std::min(v_margin, 2.0 * (v.value - inf_v) + gv);
    u_margin = std::min(u_margin, gu);
  }
  ConditionReport r;
  r.coupling = coupling;
  r.density = density;
  r.potential = {v_margin >= -kPointwiseTolerance, v_margin};
  r.terminal = {u_margin >= -kPointwiseTolerance, u_margin};
  return r;
}

}  // namespace

ConditionReport check_structural_conditions(const ProblemSpec& p, const Grid& g) {
  return translated(p, g, Point{0.0, 0.0}, coupling_check(p), density_check(p, g));
}

ConditionReport check_translated_conditions(const ProblemSpec& p, const Grid& g, const Point& y,
                                            const ConditionReport& base) {
  return translated(p, g, y, base.coupling, base.density);
}

std::string to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::Zero: return "zero";
    case PotentialFamily::GaussianWell: return "gaussian_well";
    case PotentialFamily::CosineBump: return "cosine_bump";
    case PotentialFamily::UserTable: return "user_table";
  }
  return "unknown";
}

std::string to_string(TerminalFamily f) {
  switch (f) {
    case TerminalFamily::Zero: return "zero";
    case TerminalFamily::Log: return "log";
    case TerminalFamily::Gaussian: return "gaussian";
  }
  return "unknown";
}

}  // namespace mfg
