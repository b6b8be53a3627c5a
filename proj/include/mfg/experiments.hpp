#pragma once

// Run drivers behind the command-line tool. Each driver computes an
// in-memory result and a separate writer lays it out on disk:
//
//   <dir>/metadata.json
//   <dir>/table.csv                (sweep, longtime)
//   <dir>/fields/grid.json, fields/<name>_n<index>.csv
//   <dir>/reports/*.csv, reports/*.json
//
// Nothing written depends on wall-clock time or thread count.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfg/config.hpp"
#include "mfg/diagnostics.hpp"
#include "mfg/heat_kernel.hpp"
#include "mfg/solver.hpp"

namespace mfg {

/// runs/<command>-YYYYmmdd-HHMMSS under the current directory.
std::filesystem::path default_run_dir(const std::string& command);

struct SingleRun {
  Grid grid;
  SolveOutcome outcome;
  Certificate certificate;
  std::optional<Certificate> planning;
  AprioriReport apriori;
  std::optional<EnergyReport> energy;   ///< converged runs only
  std::optional<MomentReport> moments;  ///< converged runs only
};
SingleRun run_single(const RunConfig& cfg);
void write_single(const SingleRun& run, const RunConfig& cfg, const std::filesystem::path& dir);

enum class CellLabel { Converged, NonConvergent, CertifiedNonConvergent, CertifiedButConverged };
std::string to_string(CellLabel l);

struct SweepCell {
  double sigma = 0.0;
  double T = 0.0;
  CellLabel label = CellLabel::NonConvergent;
  std::optional<double> T_star;
  double D_final = 0.0;
  int iterations = 0;
  int refinements = 0;  ///< extra grids solved for this cell
  std::string reason;   ///< solver reason of the deciding run
};

struct SweepBoundary {
  double sigma = 0.0;
  double e0 = 0.0;
  std::optional<double> T_star;
};

struct SweepResult {
  std::vector<SweepCell> cells;  ///< sorted by (sigma, T)
  std::vector<SweepBoundary> boundary;
  /// Largest sigma such that every sigma' <= sigma converges at the largest T.
  std::optional<double> empirical_threshold;
  std::optional<double> smallest_certified_T;
};
SweepResult run_sweep(const RunConfig& cfg);
void write_sweep(const SweepResult& r, const RunConfig& cfg, const std::filesystem::path& dir);

struct LongtimeRow {
  double T = 0.0;
  Verdict verdict = Verdict::MaxIterations;
  double D_final = 0.0;
  double D_over_T = 0.0;  ///< int_0^1 int m^(2 alpha + 1)(x, sT) ds
  int iterations = 0;
};
struct LongtimeResult {
  std::vector<LongtimeRow> rows;
  std::optional<double> D_ratio;  ///< max / min D over converged rows
  bool rescaled_decreasing = false;
};
LongtimeResult run_longtime(const RunConfig& cfg);
void write_longtime(const LongtimeResult& r, const RunConfig& cfg, const std::filesystem::path& dir);

struct CertifyResult {
  Certificate nonexistence;
  std::optional<Certificate> planning;
  Grid grid;
};
CertifyResult run_certify(const RunConfig& cfg);
void write_certify(const CertifyResult& r, const RunConfig& cfg, const std::filesystem::path& dir);

struct KernelRow {
  HeatKernelQuery query;
  double analytic = 0.0;
  std::optional<HeatKernelNorm> norm;  ///< empty when the norm is infinite
};
std::vector<KernelRow> kernel_table();
void write_kernel_table(const std::vector<KernelRow>& rows, const std::filesystem::path& dir);

}  // namespace mfg
