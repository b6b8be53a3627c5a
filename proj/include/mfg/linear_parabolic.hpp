#pragma once

// The two linear solves that make up one application of the fixed-point map:
//
//   backward:  -w_t - lap(w) = c(x,t) w,        w(T) = w_T > 0
//   forward:    mu_t = lap(mu) - div(b mu),     mu(0) = mu_0
//
// with c = (f(m) - V)/2 and b = 2 grad(w)/w in the fixed-point map. Implicit
// Euler by default, one tridiagonal solve per line and step; 2D uses Lie
// splitting (x sweep, then y sweep). The forward equation is in flux form
// with exponentially fitted fluxes, which makes it conservative in the
// trapezoid inner product and keeps mu >= 0.

#include <functional>
#include <span>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

enum class TimeScheme { ImplicitEuler, CrankNicolson };

struct ParabolicOptions {
  TimeScheme scheme = TimeScheme::ImplicitEuler;
  kernels::Backend backend = kernels::Backend::Auto;
};

/// Fills the zeroth-order coefficient c(., t_n) for time node n.
using CoefficientFn = std::function<void(int n, std::span<double> out)>;
/// Face drift at time node n.
using DriftFn = std::function<FaceField(int n)>;

struct BackwardHeatProblem {
  CoefficientFn coefficient;
  Slice terminal;

  static BackwardHeatProblem with_field(const SpaceTimeField& c, Slice terminal);
  static BackwardHeatProblem with_constant(double c, Slice terminal);
};

struct FokkerPlanckProblem {
  DriftFn drift;
  Slice initial;

  static FokkerPlanckProblem drift_free(Slice initial);
  static FokkerPlanckProblem constant_drift(FaceField b, Slice initial);
  /// b = 2 grad(w)/w, taken as 2 d(log w) across each face.
  static FokkerPlanckProblem from_hopf_cole(const SpaceTimeField& w, Slice initial);
  /// b = -grad(u), taken as -du across each face.
  static FokkerPlanckProblem from_value(const SpaceTimeField& u, Slice initial);
};

/// Throws PositivityError if w <= 0 or is non-finite anywhere, SolverError on
/// a singular step.
SpaceTimeField solve_backward_heat(const BackwardHeatProblem& p, const Grid& g, const ParabolicOptions& opt = {});

/// Throws PositivityError if mu < -1e-12 anywhere (the scheme was pushed
/// outside its positivity regime), SolverError on a singular step.
SpaceTimeField solve_fokker_planck(const FokkerPlanckProblem& p, const Grid& g, const ParabolicOptions& opt = {});

inline constexpr double kNegativeDensityTolerance = 1e-12;

}  // namespace mfg
