#pragma once

// INI-style run configuration.
//
//   [problem]  dim, T, sigma, alpha,
//              potential (zero | gaussian_well | cosine_bump | user_table),
//              potential_amplitude, potential_width, potential_center,
//              potential_table_start, potential_table_step, potential_table_values,
//              m0_weights, m0_means, m0_stddevs,
//              uT (zero | log | gaussian), uT_scale, uT_width, uT_center,
//              mT_weights, mT_means, mT_stddevs          (planning certificate only)
//   [grid]     half_width, nx, and one of nt / dt
//   [solver]   damping, tol, max_iter, divergence_cap,
//              time_scheme (implicit_euler | crank_nicolson), backend (auto | serial | openmp)
//   [sweep]    sigma, T, workers, refine, max_refinements
//   [longtime] T_list
//   [output]   field_snapshots, optimize_shift
//
// Lists are whitespace or comma separated; mixture means are one point per
// component, components separated by ';' (e.g. "0 0; 3 1" in 2D).

#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"
#include "mfg/solver.hpp"

namespace mfg {

struct GridSpec {
  double half_width = 12.0;
  int nx = 257;
  std::optional<int> nt;
  std::optional<double> dt;

  /// Lattice for horizon T. With dt set, nt = ceil(T/dt); otherwise the
  /// configured nt belongs to `reference_T` and is scaled with T.
  Grid for_horizon(int dim, double T, double reference_T) const;
};

struct SweepSettings {
  std::vector<double> sigma;
  std::vector<double> T;
  int workers = 0;  ///< 0: OpenMP default
  bool refine = true;
  int max_refinements = 2;
};

struct LongtimeSettings {
  std::vector<double> T_list;
};

struct OutputSettings {
  int field_snapshots = 5;  ///< evenly spaced time nodes, including 0 and T
  bool optimize_shift = true;
};

struct RunConfig {
  ProblemSpec problem;
  GridSpec grid;
  SolverConfig solver;
  SweepSettings sweep;
  LongtimeSettings longtime;
  OutputSettings output;
  std::vector<GaussianComponent> mT;  ///< empty unless a planning target is given

  Grid grid_for(double T) const { return grid.for_horizon(problem.dim, T, problem.horizon); }
};

/// Throws ConfigError listing unknown, malformed or invalid keys.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mfg
