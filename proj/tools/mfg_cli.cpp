// mfg: single solves, (sigma, T) sweeps, long-horizon runs, certificates and
// the heat-kernel exponent table. Exit status 0 on completion whatever the
// solver verdict; 2 on configuration or output errors.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "mfg/config.hpp"
#include "mfg/errors.hpp"
#include "mfg/experiments.hpp"
#include "mfg/io.hpp"

namespace fs = std::filesystem;
using namespace mfg;

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }

int cmd_solve(const fs::path& config, const fs::path& dir) {
  const RunConfig cfg = load_config(config);
  const SingleRun run = run_single(cfg);
  write_single(run, cfg, dir);
  const auto& o = run.outcome;
  std::printf("verdict %s after %d iterations, D = %s\n", to_string(o.verdict).c_str(), o.iterations,
              format_number(o.D_final).c_str());
  if (o.verdict != Verdict::Converged) std::printf("reason: %s\n", o.reason.c_str());
  if (run.energy)
    std::printf("energy drift %.3e, moment residuals r1 %.3e r2 %.3e\n", run.energy->drift, run.moments->r1,
                run.moments->r2);
  std::printf("e0 = %s, T_star = %s\n", format_number(run.certificate.e0).c_str(),
              opt(run.certificate.T_star).c_str());
  std::printf("output: %s\n", dir.string().c_str());
  return 0;
}

int cmd_sweep(const fs::path& config, const fs::path& dir) {
  const RunConfig cfg = load_config(config);
  const SweepResult r = run_sweep(cfg);
  write_sweep(r, cfg, dir);
  std::map<std::string, int> counts;
  for (const auto& c : r.cells) ++counts[to_string(c.label)];
  for (const auto& [label, n] : counts) std::printf("%-42s %d\n", label.c_str(), n);
  std::printf("empirical threshold %s, smallest certified T %s\n", opt(r.empirical_threshold).c_str(),
              opt(r.smallest_certified_T).c_str());
  std::printf("output: %s\n", dir.string().c_str());
  return 0;
}

int cmd_longtime(const fs::path& config, const fs::path& dir) {
  const RunConfig cfg = load_config(config);
  const LongtimeResult r = run_longtime(cfg);
  write_longtime(r, cfg, dir);
  for (const auto& row : r.rows)
    std::printf("T %-8g %-15s D %.6e  D/T %.6e\n", row.T, to_string(row.verdict).c_str(), row.D_final, row.D_over_T);
  std::printf("max/min D over converged runs: %s\n", opt(r.D_ratio).c_str());
  std::printf("output: %s\n", dir.string().c_str());
  return 0;
}

int cmd_certify(const fs::path& config, const fs::path& dir) {
  const RunConfig cfg = load_config(config);
  const CertifyResult r = run_certify(cfg);
  write_certify(r, cfg, dir);
  const auto& c = r.nonexistence;
  std::printf("conditions %s, e0 = %s, h0 = %s, T_star = %s\n", c.conditions.all() ? "hold" : "violated",
              format_number(c.e0).c_str(), format_number(c.h0).c_str(), opt(c.T_star).c_str());
  std::printf("T = %g is %s\n", cfg.problem.horizon, c.excludes(cfg.problem.horizon) ? "excluded" : "not excluded");
  if (r.planning) std::printf("planning T_hat = %s\n", opt(r.planning->T_hat_planning).c_str());
  std::printf("output: %s\n", dir.string().c_str());
  return 0;
}

int cmd_kernelcheck(const fs::path& dir) {
  const auto rows = kernel_table();
  write_kernel_table(rows, dir);
  std::printf("%-2s %-9s %-6s %-12s %-12s\n", "N", "kind", "q", "analytic", "fitted");
  for (const auto& r : rows) {
    std::printf("%-2d %-9s %-6g %-12.6f ", r.query.dim, r.query.kind == KernelNorm::Kernel ? "kernel" : "gradient",
                r.query.exponent, r.analytic);
    if (r.norm)
      std::printf("%-12.6f\n", r.norm->fitted_exponent);
    else
      std::printf("infinite\n");
  }
  std::printf("output: %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean field game solver and diagnostics"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("-o,--out", out, "output directory (default runs/<command>-<timestamp>)");

  std::string config;
  const auto with_config = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out, "output directory");
    return sub;
  };
  auto* solve_cmd = with_config("solve", "solve one problem with full diagnostics");
  auto* sweep_cmd = with_config("sweep", "(sigma, T) phase table");
  auto* longtime_cmd = with_config("longtime", "D over a list of horizons");
  auto* certify_cmd = with_config("certify", "non-existence and planning certificates, no PDE solve");
  auto* kernel_cmd = app.add_subcommand("kernelcheck", "heat-kernel space-time norm exponents");
  kernel_cmd->add_option("-o,--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  const auto dir_for = [&](const char* name) { return out.empty() ? default_run_dir(name) : fs::path(out); };
  try {
    if (*solve_cmd) return cmd_solve(config, dir_for("solve"));
    if (*sweep_cmd) return cmd_sweep(config, dir_for("sweep"));
    if (*longtime_cmd) return cmd_longtime(config, dir_for("longtime"));
    if (*certify_cmd) return cmd_certify(config, dir_for("certify"));
    if (*kernel_cmd) return cmd_kernelcheck(dir_for("kernelcheck"));
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
