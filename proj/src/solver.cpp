#include "mfg/solver.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "mfg/errors.hpp"
#include "mfg/operators.hpp"

namespace mfg {

void SolverConfig::validate() const {
  std::vector<std::string> bad;
  if (!(damping > 0.0 && damping <= 1.0)) bad.emplace_back("damping");
  if (!(tol > 0.0)) bad.emplace_back("tol");
  if (max_iter < 1) bad.emplace_back("max_iter");
  if (!(divergence_cap > 0.0)) bad.emplace_back("divergence_cap");
  if (!bad.empty()) {
    std::string msg = "invalid solver parameters:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    case Verdict::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

SpaceTimeField hopf_cole(const SpaceTimeField& u) {
  SpaceTimeField w(u.grid());
  for (std::size_t i = 0; i < u.values().size(); ++i) w.values()[i] = std::exp(-0.5 * u.values()[i]);
  return w;
}

SpaceTimeField inverse_hopf_cole(const SpaceTimeField& w) {
  SpaceTimeField u(w.grid());
  for (std::size_t i = 0; i < w.values().size(); ++i) {
    const double v = w.values()[i];
    if (!(v > 0.0)) throw DomainError("inverse Hopf-Cole needs w > 0");
    u.values()[i] = -2.0 * std::log(v);
  }
  return u;
}

double space_time_power(const SpaceTimeField& mu, double power) {
  const Grid& g = mu.grid();
  const auto weights = g.weights();
  std::vector<double> series(g.time_nodes());
  for (int n = 0; n < g.time_nodes(); ++n) {
    double acc = 0.0;
    const auto s = mu.slice(n);
    for (std::size_t k = 0; k < s.size(); ++k) acc += weights[k] * std::pow(std::abs(s[k]), power);
    series[n] = acc;
  }
  return integrate_time(series, g);
}

double relative_l1(const SpaceTimeField& a, const SpaceTimeField& b) {
  const Grid& g = b.grid();
  const auto weights = g.weights();
  std::vector<double> diff(g.time_nodes()), ref(g.time_nodes());
  for (int n = 0; n < g.time_nodes(); ++n) {
    const auto sa = a.slice(n);
    const auto sb = b.slice(n);
    double d = 0.0, r = 0.0;
    for (std::size_t k = 0; k < sb.size(); ++k) {
      d += weights[k] * std::abs(sa[k] - sb[k]);
      r += weights[k] * std::abs(sb[k]);
    }
    diff[n] = d;
    ref[n] = r;
  }
  const double denom = integrate_time(ref, g);
  return denom > 0.0 ? integrate_time(diff, g) / denom : integrate_time(diff, g);
}

PicardMap::PicardMap(const ProblemSpec& p, const Grid& g, ParabolicOptions opt)
    : problem_(p), grid_(g), opt_(opt), data_(sample_on_grid(p, g)) {
  w_terminal_.resize(g.nodes());
  for (std::size_t k = 0; k < w_terminal_.size(); ++k) w_terminal_[k] = std::exp(-0.5 * data_.uT[k]);
}

PicardResult PicardMap::operator()(const SpaceTimeField& m) const {
  const CouplingSpec c = problem_.coupling;
  const Slice& V = data_.V;
  // w = exp(-u/2) turns -u_t - lap u + |grad u|^2/2 = -f + V into
  // -w_t - lap w = (f - V) w / 2; the factor 1/2 is what makes u = -2 log w
  // solve the HJB equation with this f and V.
  // m is read in place: the backward solve finishes before m can change.
  BackwardHeatProblem backward{[&m, &V, c](int n, std::span<double> out) {
                                 const auto mn = m.slice(n);
                                 for (std::size_t k = 0; k < out.size(); ++k)
                                   out[k] = 0.5 * (eval_coupling(c, std::max(mn[k], 0.0)).f - V[k]);
                               },
                               w_terminal_};
  PicardResult r;
  r.w = solve_backward_heat(backward, grid_, opt_);
  r.mu = solve_fokker_planck(FokkerPlanckProblem::from_hopf_cole(r.w, data_.m0), grid_, opt_);
  return r;
}

SpaceTimeField PicardMap::heat_flow() const {
  return solve_fokker_planck(FokkerPlanckProblem::drift_free(data_.m0), grid_, opt_);
}

PicardResult picard_map(const SpaceTimeField& m, const ProblemSpec& p, const Grid& g, ParabolicOptions opt) {
  return PicardMap(p, g, opt)(m);
}

namespace {

// Density re-solved with the node-gradient drift -grad(u), averaged onto faces.
SpaceTimeField reconstruct_density(const SpaceTimeField& u, const Slice& m0, const ParabolicOptions& opt) {
  const Grid& g = u.grid();
  auto shared = std::make_shared<const SpaceTimeField>(u);
  FokkerPlanckProblem fp{[shared, &g](int n) {
                           VectorField grad = gradient(shared->slice(n), g);
                           for (int a = 0; a < g.dim; ++a)
                             for (double& v : grad.comp[a]) v = -v;
                           return to_faces(grad, g);
                         },
                         m0};
  return solve_fokker_planck(fp, g, opt);
}

}  // namespace

SolveOutcome solve(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg) {
  validate(p);
  cfg.validate();
  if (g.dim != p.dim) throw ConfigError("grid and problem dimensions differ", {"dim"});

  SolveOutcome out;
  const PicardMap map(p, g, cfg.parabolic);
  const double power = 2.0 * p.coupling.alpha + 1.0;

  SpaceTimeField m;
  try {
    m = map.heat_flow();
  } catch (const SolverError& e) {
    out.verdict = Verdict::Diverged;
    out.reason = e.what();
    return out;
  }

  for (int k = 1; k <= cfg.max_iter; ++k) {
    out.iterations = k;
    PicardResult r;
    try {
      r = map(m);
    } catch (const SolverError& e) {
      out.verdict = Verdict::Diverged;
      out.reason = e.what();
      return out;
    }
    out.D_final = space_time_power(r.mu, power);
    if (!std::isfinite(out.D_final) || !r.mu.all_finite() || !r.w.all_finite()) {
      out.verdict = Verdict::Diverged;
      out.reason = "non-finite values in the iterate";
      out.w = std::move(r.w);
      return out;
    }
    if (out.D_final > cfg.divergence_cap) {
      out.verdict = Verdict::Diverged;
      out.reason = "D exceeded the divergence cap";
      out.w = std::move(r.w);
      return out;
    }
    const double residual = relative_l1(r.mu, m);
    out.residual_history.push_back(residual);
    if (residual <= cfg.tol) {
      out.verdict = Verdict::Converged;
      out.m = std::move(r.mu);
      out.w = std::move(r.w);
      break;
    }
    auto& mv = m.values();
    const auto& fv = r.mu.values();
    for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = (1.0 - cfg.damping) * mv[i] + cfg.damping * fv[i];
    out.w = std::move(r.w);
  }

  if (out.verdict != Verdict::Converged) {
    out.reason = "iteration limit reached";
    return out;
  }

  out.u = inverse_hopf_cole(out.w);
  const auto res = self_consistency_residual(out.u, out.m, p, g);
  out.hjb_residual = res.hjb;
  out.fp_residual = res.fp;
  try {
    out.reconstruction_residual = relative_l1(reconstruct_density(out.u, map.data().m0, cfg.parabolic), out.m);
  } catch (const SolverError&) {
    out.reconstruction_residual = std::numeric_limits<double>::infinity();
  }
  return out;
}

ConsistencyResidual self_consistency_residual(const SpaceTimeField& u, const SpaceTimeField& m,
                                              const ProblemSpec& p, const Grid& g) {
  const SampledData data = sample_on_grid(p, g);
  const double dt = g.dt();
  ConsistencyResidual r;
  for (int n = 1; n < g.nt; ++n) {
    const auto un = u.slice(n);
    const auto mn = m.slice(n);
    const Slice lap_u = laplacian(un, g);
    const VectorField grad_u = gradient(un, g);
    const Slice lap_m = laplacian(mn, g);
    const VectorField grad_m = gradient(mn, g);
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      if (g.on_boundary(k)) continue;
      double grad2 = 0.0, cross = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        grad2 += grad_u.comp[a][k] * grad_u.comp[a][k];
        cross += grad_u.comp[a][k] * grad_m.comp[a][k];
      }
      const double w = g.weight(k) * dt;
      const double mk = std::max(mn[k], 0.0);
      const double hjb = -(u.at(n + 1, k) - un[k]) / dt - lap_u[k] + 0.5 * grad2 +
                         eval_coupling(p.coupling, mk).f - data.V[k];
      const double fp = (mn[k] - m.at(n - 1, k)) / dt - lap_m[k] - (cross + mn[k] * lap_u[k]);
      r.hjb += w * std::abs(hjb);
      r.fp += w * std::abs(fp);
    }
  }
  return r;
}

}  // namespace mfg
