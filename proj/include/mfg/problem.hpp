#pragma once

// The continuous problem: power-law coupling, potential, initial density
// and terminal cost, plus the structural hypotheses of the non-existence
// theory checked on a grid.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"

namespace mfg {

/// f(m) = sigma * m^alpha.
struct CouplingSpec {
  double sigma = 0.0;
  double alpha = 2.0;
};

struct CouplingValue {
  double f = 0.0;        ///< sigma m^alpha
  double F = 0.0;        ///< antiderivative sigma m^(alpha+1) / (alpha+1)
  double f_prime = 0.0;  ///< sigma alpha m^(alpha-1); 0 at m = 0 when alpha >= 1
};

/// Throws DomainError for m < 0.
CouplingValue eval_coupling(const CouplingSpec& c, double m);

enum class PotentialFamily { Zero, GaussianWell, CosineBump, UserTable };

/// gaussian_well:  V = -A exp(-|x-c|^2 / (2 w^2))
/// cosine_bump:    V = A ((1 + cos(pi r / w)) / 2)^2 for r = |x-c| < w, else 0 (C^2)
/// user_table:     1D cubic B-spline through values sampled at start + i*step,
///                 held constant outside the table
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::Zero;
  double amplitude = 0.0;
  double width = 1.0;
  Point center{0.0, 0.0};
  double table_start = 0.0;
  double table_step = 1.0;
  std::vector<double> table_values;
};

struct GaussianComponent {
  double weight = 1.0;
  Point mean{0.0, 0.0};
  double stddev = 1.0;
};

enum class TerminalFamily { Zero, Log, Gaussian };

/// log:       u_T = c log(1 + |x-x_c|^2)
/// gaussian:  u_T = c (1 - exp(-|x-x_c|^2 / (2 w^2)))
struct TerminalSpec {
  TerminalFamily family = TerminalFamily::Zero;
  double scale = 0.0;
  double width = 1.0;
  Point center{0.0, 0.0};
};

struct DataSpec {
  std::vector<GaussianComponent> m0{GaussianComponent{}};
  TerminalSpec uT;
};

struct ProblemSpec {
  int dim = 1;
  double horizon = 1.0;
  CouplingSpec coupling;
  PotentialSpec potential;
  DataSpec data;
};

/// Throws ConfigError listing every invalid field.
void validate(const ProblemSpec& p);

struct PotentialValue {
  double value = 0.0;
  Point grad{0.0, 0.0};
  double laplacian = 0.0;
};

/// Pointwise closed-form evaluator for V. Holds the spline for user tables.
class Potential {
 public:
  Potential(const PotentialSpec& spec, int dim);
  ~Potential();
  Potential(Potential&&) noexcept;
  Potential& operator=(Potential&&) noexcept;

  PotentialValue operator()(const Point& x) const;

 private:
  struct Spline;
  PotentialSpec spec_;
  int dim_;
  std::unique_ptr<Spline> spline_;
};

/// Mixture density (weights normalized to sum 1) and its gradient.
struct DensityValue {
  double value = 0.0;
  Point grad{0.0, 0.0};
};
DensityValue eval_density(std::span<const GaussianComponent> mixture, int dim, const Point& x);

struct TerminalValue {
  double value = 0.0;
  Point grad{0.0, 0.0};
};
TerminalValue eval_terminal(const TerminalSpec& t, int dim, const Point& x);

/// Closed forms sampled at the grid nodes. m0 is rescaled so that its
/// trapezoid mass is 1; grad_m0 carries the same factor.
struct SampledData {
  Slice m0;
  VectorField grad_m0;
  double m0_raw_mass = 1.0;
  Slice uT;
  VectorField grad_uT;
  Slice V;
  VectorField grad_V;
  Slice lap_V;
};

SampledData sample_on_grid(const ProblemSpec& p, const Grid& g);

struct ConditionCheck {
  bool holds = false;
  double margin = 0.0;  ///< worst value of the quantity required to be >= 0
};

struct ConditionReport {
  ConditionCheck coupling;   ///< N f(m) m - (N+2) F(m) >= 0
  ConditionCheck potential;  ///< 2 (V - inf V) + grad V . x >= 0
  ConditionCheck terminal;   ///< grad u_T . x >= 0
  ConditionCheck density;    ///< unit mass (margin = -|mass - 1|) and m0 >= 0
  bool all() const noexcept { return coupling.holds && potential.holds && terminal.holds && density.holds; }
};

inline constexpr double kMassTolerance = 1e-8;

ConditionReport check_structural_conditions(const ProblemSpec& p, const Grid& g);

/// Potential and terminal conditions for the problem translated by y
/// (V(x+y), u_T(x+y)), evaluated on the grid nodes x. The translation-invariant
/// coupling and density checks are copied from `base`.
ConditionReport check_translated_conditions(const ProblemSpec& p, const Grid& g, const Point& y,
                                            const ConditionReport& base);

std::string to_string(PotentialFamily f);
std::string to_string(TerminalFamily f);

}  // namespace mfg
