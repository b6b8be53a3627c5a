#pragma once

// Damped Picard iteration on the map m -> mu: solve the backward equation for
// w with coefficient (f(m) - V)/2, then the forward equation for mu with drift
// 2 grad(w)/w. A fixed point gives the MFG solution through u = -2 log w.

#include <string>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/linear_parabolic.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct SolverConfig {
  double damping = 1.0;          ///< theta in (0, 1]
  double tol = 1e-8;             ///< on the relative space-time L1 fixed-point residual
  int max_iter = 200;
  double divergence_cap = 1e6;   ///< on D = int int mu^(2 alpha + 1)
  ParabolicOptions parabolic;

  /// Throws ConfigError naming every invalid field.
  void validate() const;
};

enum class Verdict { Converged, Diverged, MaxIterations };
std::string to_string(Verdict v);

struct SolveOutcome {
  Verdict verdict = Verdict::MaxIterations;
  SpaceTimeField u;  ///< only when converged
  SpaceTimeField m;  ///< only when converged
  SpaceTimeField w;  ///< last backward solve
  std::vector<double> residual_history;
  int iterations = 0;
  double D_final = 0.0;
  std::string reason;  ///< why the run stopped, for non-converged verdicts

  // Populated when converged.
  double hjb_residual = 0.0;
  double fp_residual = 0.0;
  /// Relative L1 distance between m and the density re-solved with drift -grad(u)
  /// taken from node gradients of u (an independent discretization of the drift).
  double reconstruction_residual = 0.0;
};

/// w = exp(-u/2) node-wise.
SpaceTimeField hopf_cole(const SpaceTimeField& u);
/// u = -2 log w node-wise. Throws DomainError if w <= 0 anywhere.
SpaceTimeField inverse_hopf_cole(const SpaceTimeField& w);

struct PicardResult {
  SpaceTimeField mu;
  SpaceTimeField w;
};

/// The fixed-point map with the problem data sampled once.
class PicardMap {
 public:
  PicardMap(const ProblemSpec& p, const Grid& g, ParabolicOptions opt = {});

  PicardResult operator()(const SpaceTimeField& m) const;
  /// Drift-free heat flow of m0; the default starting iterate.
  SpaceTimeField heat_flow() const;

  const SampledData& data() const noexcept { return data_; }
  const Grid& grid() const noexcept { return grid_; }

 private:
  ProblemSpec problem_;
  Grid grid_;
  ParabolicOptions opt_;
  SampledData data_;
  Slice w_terminal_;
};

PicardResult picard_map(const SpaceTimeField& m, const ProblemSpec& p, const Grid& g, ParabolicOptions opt = {});

/// Numerical failure is reported through the verdict; only invalid
/// configurations throw (ConfigError).
SolveOutcome solve(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg);

struct ConsistencyResidual {
  double hjb = 0.0;
  double fp = 0.0;
};

/// Pointwise residuals of both MFG equations under the discrete operators
/// (backward difference in time for the density, forward for the value),
/// as weighted L1 norms over interior space-time nodes.
ConsistencyResidual self_consistency_residual(const SpaceTimeField& u, const SpaceTimeField& m,
                                              const ProblemSpec& p, const Grid& g);

/// int_0^T int |mu|^power, trapezoid in space and time.
double space_time_power(const SpaceTimeField& mu, double power);

/// Relative space-time L1 distance ||a - b|| / ||b||.
double relative_l1(const SpaceTimeField& a, const SpaceTimeField& b);

}  // namespace mfg
