#include "mfg/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>

#include "mfg/errors.hpp"
#include "mfg/io.hpp"

namespace mfg {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path default_run_dir(const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  return fs::path("runs") / (command + "-" + stamp);
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<int> snapshot_indices(int nt, int count) {
  std::vector<int> idx;
  if (count <= 0) return idx;
  if (count == 1) return {nt};
  for (int i = 0; i < count; ++i) {
    const int n = static_cast<int>(std::lround(static_cast<double>(i) * nt / (count - 1)));
    if (idx.empty() || idx.back() != n) idx.push_back(n);
  }
  return idx;
}

std::string snapshot_name(const std::string& field, int n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_n%06d.csv", field.c_str(), n);
  return buf;
}

std::vector<double> time_axis(const Grid& g) {
  std::vector<double> t(g.time_nodes());
  for (int n = 0; n < g.time_nodes(); ++n) t[n] = g.time(n);
  return t;
}

std::vector<double> iota_vector(std::size_t n, double start = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + static_cast<double>(i);
  return v;
}

double max_mass_error(const MomentReport& mr) {
  double err = 0.0;
  for (double m : mr.mass) err = std::max(err, std::abs(m - mr.mass.front()) / mr.mass.front());
  return err;
}

}  // namespace

// --- single solve ----------------------------------------------------------

SingleRun run_single(const RunConfig& cfg) {
  SingleRun run;
  run.grid = cfg.grid_for(cfg.problem.horizon);
  run.outcome = solve(cfg.problem, run.grid, cfg.solver);
  run.certificate = compute_nonexistence_certificate(cfg.problem, run.grid, cfg.output.optimize_shift);
  if (!cfg.mT.empty()) run.planning = compute_planning_certificate(cfg.mT, cfg.problem, run.grid);
  if (run.outcome.verdict == Verdict::Converged) {
    run.apriori = compute_apriori(run.outcome.m, cfg.problem);
    run.energy = compute_energy(run.outcome.u, run.outcome.m, cfg.problem);
    run.moments = check_moment_identity(run.outcome.u, run.outcome.m, cfg.problem);
  } else {
    run.apriori = apriori_exponents(cfg.problem, run.outcome.D_final);
  }
  return run;
}

void write_single(const SingleRun& run, const RunConfig& cfg, const fs::path& dir) {
  const auto& out = run.outcome;
  ensure_directory(dir / "fields");
  ensure_directory(dir / "reports");

  json meta{{"command", "solve"},
            {"verdict", to_string(out.verdict)},
            {"iterations", out.iterations},
            {"D_final", out.D_final},
            {"residual_final", out.residual_history.empty() ? json(nullptr) : json(out.residual_history.back())},
            {"problem", to_json(cfg.problem)},
            {"grid", to_json(run.grid)},
            {"solver", to_json(cfg.solver)},
            {"certificate_excludes_T", run.certificate.excludes(cfg.problem.horizon)}};
  if (out.verdict != Verdict::Converged) meta["reason"] = out.reason;
  if (out.verdict == Verdict::Converged) {
    meta["hjb_residual"] = out.hjb_residual;
    meta["fp_residual"] = out.fp_residual;
    meta["reconstruction_residual"] = out.reconstruction_residual;
    meta["energy_drift"] = run.energy->drift;
    meta["moment_r1"] = run.moments->r1;
    meta["moment_r2"] = run.moments->r2;
    meta["min_d2h"] = run.moments->min_d2h;
    meta["mass_error_max"] = max_mass_error(*run.moments);
  }
  write_json(dir / "metadata.json", meta);

  write_csv(dir / "reports" / "residuals.csv",
            {{"iteration", iota_vector(out.residual_history.size(), 1.0)}, {"residual", out.residual_history}});
  write_json(dir / "reports" / "certificate.json", to_json(run.certificate));
  if (run.planning) write_json(dir / "reports" / "planning_certificate.json", to_json(*run.planning));
  write_json(dir / "reports" / "apriori.json", to_json(run.apriori));

  if (run.energy) {
    const auto& e = *run.energy;
    write_csv(dir / "reports" / "energy.csv", {{"t", time_axis(run.grid)},
                                               {"E", e.E},
                                               {"transport", e.components.transport},
                                               {"kinetic", e.components.kinetic},
                                               {"coupling", e.components.coupling},
                                               {"potential", e.components.potential}});
  }
  if (run.moments) {
    const auto& m = *run.moments;
    write_csv(dir / "reports" / "moments.csv", {{"t", time_axis(run.grid)},
                                                {"mass", m.mass},
                                                {"tail_mass", m.tail_mass},
                                                {"absmoment", m.absmoment},
                                                {"h", m.h},
                                                {"dh", m.dh},
                                                {"d2h", m.d2h},
                                                {"rhs1", m.rhs1},
                                                {"rhs2", m.rhs2}});
  }

  const auto snaps = snapshot_indices(run.grid.nt, cfg.output.field_snapshots);
  json grid = to_json(run.grid);
  json files = json::array();
  const auto dump = [&](const std::string& name, const SpaceTimeField& f) {
    if (f.empty()) return;
    for (int n : snaps) {
      write_field_slice(dir / "fields" / snapshot_name(name, n), f.slice(n), run.grid);
      files.push_back({{"field", name}, {"n", n}, {"t", run.grid.time(n)}, {"file", snapshot_name(name, n)}});
    }
  };
  dump("m", out.m);
  dump("u", out.u);
  dump("w", out.w);
  grid["snapshots"] = files;
  write_json(dir / "fields" / "grid.json", grid);
}

// --- sweep -----------------------------------------------------------------

std::string to_string(CellLabel l) {
  switch (l) {
    case CellLabel::Converged: return "converged";
    case CellLabel::NonConvergent: return "non_convergent";
    case CellLabel::CertifiedNonConvergent: return "certified_nonexistent_and_non_convergent";
    case CellLabel::CertifiedButConverged: return "certified_nonexistent_but_converged";
  }
  return "unknown";
}

namespace {

SolverConfig cell_solver(const RunConfig& cfg) {
  SolverConfig s = cfg.solver;
  s.parabolic.backend = kernels::Backend::Serial;  // cells are the unit of parallelism
  return s;
}

// A failed run is retried on refined grids and counts as convergent if any
// of them converges. A certified cell that converges is re-solved on every
// refinement and keeps the contradiction label only if all of them converge.
SweepCell run_cell(const RunConfig& cfg, double sigma, double T, const Certificate& cert) {
  ProblemSpec p = cfg.problem;
  p.coupling.sigma = sigma;
  p.horizon = T;
  const SolverConfig s = cell_solver(cfg);
  const int extra = cfg.sweep.refine ? cfg.sweep.max_refinements : 0;

  SweepCell cell;
  cell.sigma = sigma;
  cell.T = T;
  cell.T_star = cert.T_star;
  const bool certified = cert.excludes(T);

  Grid g = cfg.grid_for(T);
  SolveOutcome out = solve(p, g, s);
  const auto record = [&](const SolveOutcome& o) {
    cell.D_final = o.D_final;
    cell.iterations = o.iterations;
    cell.reason = o.reason;
  };
  record(out);
  bool converged = out.verdict == Verdict::Converged;

  if (!certified) {
    for (int r = 0; r < extra && !converged; ++r) {
      g = g.refined();
      out = solve(p, g, s);
      ++cell.refinements;
      converged = out.verdict == Verdict::Converged;
      record(out);
    }
    cell.label = converged ? CellLabel::Converged : CellLabel::NonConvergent;
    return cell;
  }

  if (converged) {
    for (int r = 0; r < extra && converged; ++r) {
      g = g.refined();
      out = solve(p, g, s);
      ++cell.refinements;
      converged = out.verdict == Verdict::Converged;
      record(out);
    }
  }
  cell.label = converged ? CellLabel::CertifiedButConverged : CellLabel::CertifiedNonConvergent;
  return cell;
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg) {
  const auto& sigmas = cfg.sweep.sigma;
  const auto& Ts = cfg.sweep.T;
  if (sigmas.empty() || Ts.empty()) throw ConfigError("sweep needs non-empty sigma and T lists", {"sweep.sigma", "sweep.T"});

  SweepResult res;
  std::vector<Certificate> certs(sigmas.size());
  const Grid cert_grid = cfg.grid_for(cfg.problem.horizon);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    ProblemSpec p = cfg.problem;
    p.coupling.sigma = sigmas[i];
    certs[i] = compute_nonexistence_certificate(p, cert_grid, cfg.output.optimize_shift);
    res.boundary.push_back({sigmas[i], certs[i].e0, certs[i].T_star});
  }

  const std::size_t total = sigmas.size() * Ts.size();
  res.cells.resize(total);
  const int workers = cfg.sweep.workers > 0 ? cfg.sweep.workers : omp_get_max_threads();
  // Costly cells sit at large sigma and T; start from that end.
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t c = static_cast<std::ptrdiff_t>(total) - 1; c >= 0; --c) {
    const std::size_t i = static_cast<std::size_t>(c) / Ts.size();
    const std::size_t j = static_cast<std::size_t>(c) % Ts.size();
    res.cells[c] = run_cell(cfg, sigmas[i], Ts[j], certs[i]);
  }

  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const auto& last = res.cells[i * Ts.size() + Ts.size() - 1];
    const bool ok = last.label == CellLabel::Converged || last.label == CellLabel::CertifiedButConverged;
    if (!ok) break;
    res.empirical_threshold = sigmas[i];
  }
  for (const auto& c : res.cells)
    if (c.label == CellLabel::CertifiedNonConvergent || c.label == CellLabel::CertifiedButConverged)
      res.smallest_certified_T = std::min(res.smallest_certified_T.value_or(c.T), c.T);
  return res;
}

void write_sweep(const SweepResult& r, const RunConfig& cfg, const fs::path& dir) {
  ensure_directory(dir / "reports");
  {
    // Label and optional T_star are not numeric; write this table by hand.
    auto f = std::fopen((dir / "table.csv").c_str(), "wb");
    if (!f) throw ConfigError("cannot write " + (dir / "table.csv").string(), {});
    std::fputs("sigma,T,verdict,T_star,D_final,iterations\n", f);
    for (const auto& c : r.cells) {
      std::fprintf(f, "%s,%s,%s,%s,%s,%d\n", format_number(c.sigma).c_str(), format_number(c.T).c_str(),
                   to_string(c.label).c_str(), c.T_star ? format_number(*c.T_star).c_str() : "",
                   format_number(c.D_final).c_str(), c.iterations);
    }
    std::fclose(f);
  }
  {
    auto f = std::fopen((dir / "boundary.csv").c_str(), "wb");
    if (!f) throw ConfigError("cannot write " + (dir / "boundary.csv").string(), {});
    std::fputs("sigma,e0,T_star\n", f);
    for (const auto& b : r.boundary)
      std::fprintf(f, "%s,%s,%s\n", format_number(b.sigma).c_str(), format_number(b.e0).c_str(),
                   b.T_star ? format_number(*b.T_star).c_str() : "");
    std::fclose(f);
  }
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"sigma", c.sigma},
                     {"T", c.T},
                     {"verdict", to_string(c.label)},
                     {"T_star", optional_number(c.T_star)},
                     {"D_final", c.D_final},
                     {"iterations", c.iterations},
                     {"refinements", c.refinements},
                     {"reason", c.reason}});
  write_json(dir / "reports" / "cells.json", cells);

  std::map<std::string, int> counts;
  for (const auto& c : r.cells) ++counts[to_string(c.label)];
  write_json(dir / "metadata.json", {{"command", "sweep"},
                                     {"problem", to_json(cfg.problem)},
                                     {"grid_reference", to_json(cfg.grid_for(cfg.problem.horizon))},
                                     {"solver", to_json(cfg.solver)},
                                     {"sigma", cfg.sweep.sigma},
                                     {"T", cfg.sweep.T},
                                     {"refine", cfg.sweep.refine},
                                     {"max_refinements", cfg.sweep.max_refinements},
                                     {"counts", counts},
                                     {"empirical_threshold", optional_number(r.empirical_threshold)},
                                     {"smallest_certified_T", optional_number(r.smallest_certified_T)}});
}

// --- long horizon ------------------------------------------------------------

LongtimeResult run_longtime(const RunConfig& cfg) {
  if (cfg.longtime.T_list.empty()) throw ConfigError("longtime needs a T_list", {"longtime.T_list"});
  LongtimeResult res;
  res.rows.resize(cfg.longtime.T_list.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    ProblemSpec p = cfg.problem;
    p.horizon = cfg.longtime.T_list[i];
    const SolveOutcome out = solve(p, cfg.grid_for(p.horizon), cfg.solver);
    res.rows[i] = {p.horizon, out.verdict, out.D_final, out.D_final / p.horizon, out.iterations};
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  res.rescaled_decreasing = true;
  const LongtimeRow* prev = nullptr;
  for (const auto& r : res.rows) {
    if (r.verdict != Verdict::Converged) continue;
    lo = std::min(lo, r.D_final);
    hi = std::max(hi, r.D_final);
    if (prev && !(r.D_over_T < prev->D_over_T)) res.rescaled_decreasing = false;
    prev = &r;
  }
  if (prev) res.D_ratio = hi / lo;
  return res;
}

void write_longtime(const LongtimeResult& r, const RunConfig& cfg, const fs::path& dir) {
  ensure_directory(dir);
  auto f = std::fopen((dir / "table.csv").c_str(), "wb");
  if (!f) throw ConfigError("cannot write " + (dir / "table.csv").string(), {});
  std::fputs("T,verdict,D_final,D_over_T,iterations\n", f);
  for (const auto& row : r.rows)
    std::fprintf(f, "%s,%s,%s,%s,%d\n", format_number(row.T).c_str(), to_string(row.verdict).c_str(),
                 format_number(row.D_final).c_str(), format_number(row.D_over_T).c_str(), row.iterations);
  std::fclose(f);
  write_json(dir / "metadata.json", {{"command", "longtime"},
                                     {"problem", to_json(cfg.problem)},
                                     {"grid_reference", to_json(cfg.grid_for(cfg.problem.horizon))},
                                     {"solver", to_json(cfg.solver)},
                                     {"T_list", cfg.longtime.T_list},
                                     {"D_ratio_max_over_min", optional_number(r.D_ratio)},
                                     {"D_over_T_decreasing", r.rescaled_decreasing}});
}

// --- certificates only ------------------------------------------------------

CertifyResult run_certify(const RunConfig& cfg) {
  CertifyResult r;
  r.grid = cfg.grid_for(cfg.problem.horizon);
  r.nonexistence = compute_nonexistence_certificate(cfg.problem, r.grid, cfg.output.optimize_shift);
  if (!cfg.mT.empty()) r.planning = compute_planning_certificate(cfg.mT, cfg.problem, r.grid);
  return r;
}

void write_certify(const CertifyResult& r, const RunConfig& cfg, const fs::path& dir) {
  ensure_directory(dir / "reports");
  write_json(dir / "reports" / "certificate.json", to_json(r.nonexistence));
  if (r.planning) write_json(dir / "reports" / "planning_certificate.json", to_json(*r.planning));
  json meta{{"command", "certify"},
            {"problem", to_json(cfg.problem)},
            {"grid", to_json(r.grid)},
            {"e0", r.nonexistence.e0},
            {"T_star", optional_number(r.nonexistence.T_star)},
            {"excludes_T", r.nonexistence.excludes(cfg.problem.horizon)}};
  if (r.planning) {
    meta["T_hat_planning"] = optional_number(r.planning->T_hat_planning);
    meta["planning_excludes_T"] = r.planning->T_hat_planning && cfg.problem.horizon > *r.planning->T_hat_planning;
  }
  write_json(dir / "metadata.json", meta);
}

// --- heat-kernel exponents --------------------------------------------------

std::vector<KernelRow> kernel_table() {
  const std::vector<HeatKernelQuery> queries{
      {1, 1.5, 1.0, KernelNorm::Kernel},   {1, 2.0, 1.0, KernelNorm::Kernel},   {1, 3.0, 1.0, KernelNorm::Kernel},
      {2, 1.5, 1.0, KernelNorm::Kernel},   {2, 2.0, 1.0, KernelNorm::Kernel},   {2, 3.0, 1.0, KernelNorm::Kernel},
      {1, 1.2, 1.0, KernelNorm::Gradient}, {1, 1.4, 1.0, KernelNorm::Gradient}, {2, 1.2, 1.0, KernelNorm::Gradient},
  };
  std::vector<KernelRow> rows;
  for (const auto& q : queries) {
    KernelRow row{q, analytic_norm_exponent(q), std::nullopt};
    try {
      row.norm = heat_kernel_spacetime_norm(q);
    } catch (const DivergenceError&) {
    }
    rows.push_back(row);
  }
  return rows;
}

void write_kernel_table(const std::vector<KernelRow>& rows, const fs::path& dir) {
  ensure_directory(dir);
  auto f = std::fopen((dir / "table.csv").c_str(), "wb");
  if (!f) throw ConfigError("cannot write " + (dir / "table.csv").string(), {});
  std::fputs("N,kind,exponent,analytic_exponent,fitted_exponent,abs_error,norm_at_t1,status\n", f);
  for (const auto& r : rows) {
    const char* kind = r.query.kind == KernelNorm::Kernel ? "kernel" : "gradient";
    if (r.norm) {
      std::fprintf(f, "%d,%s,%s,%s,%s,%s,%s,finite\n", r.query.dim, kind, format_number(r.query.exponent).c_str(),
                   format_number(r.analytic).c_str(), format_number(r.norm->fitted_exponent).c_str(),
                   format_number(std::abs(r.norm->fitted_exponent - r.analytic)).c_str(),
                   format_number(r.norm->value).c_str());
    } else {
      std::fprintf(f, "%d,%s,%s,%s,,,,infinite\n", r.query.dim, kind, format_number(r.query.exponent).c_str(),
                   format_number(r.analytic).c_str());
    }
  }
  std::fclose(f);
}

}  // namespace mfg
