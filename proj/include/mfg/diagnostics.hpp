#pragma once

// Conserved quantities, moment identities, the non-existence certificates
// and the a-priori quantity D, evaluated on discrete trajectories.
//
// Time series have one entry per time node. Derivatives of h are centred
// differences in the interior and one-sided (second order for h', three-point
// for h'') at the two ends; residuals only use interior nodes.

#include <optional>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct EnergyComponents {
  std::vector<double> transport;  ///< int grad u . grad m
  std::vector<double> kinetic;    ///< 1/2 int |grad u|^2 m
  std::vector<double> coupling;   ///< int F(m)
  std::vector<double> potential;  ///< int V m (enters E with a minus sign)
};

struct EnergyReport {
  std::vector<double> E;
  double drift = 0.0;  ///< max_t |E(t) - E(0)|
  EnergyComponents components;
};

EnergyReport compute_energy(const SpaceTimeField& u, const SpaceTimeField& m, const ProblemSpec& p);

struct MomentReport {
  std::vector<double> mass;
  std::vector<double> tail_mass;  ///< mass in the outer tenth of the box, per axis
  std::vector<double> absmoment;  ///< int |x| m
  std::vector<double> h;          ///< int |x|^2 m
  std::vector<double> dh;         ///< h'
  std::vector<double> d2h;        ///< h''
  std::vector<double> rhs1;       ///< 2N mass(0) - 2 int m grad u . x
  std::vector<double> rhs2;       ///< 4E + 2N int f(m) m - 2(N+2) int F(m) + 4 int V m + 2 int grad V . x m
  double r1 = 0.0;                ///< time-L1 of h' - rhs1 over interior nodes
  double r2 = 0.0;                ///< time-L1 of h'' - rhs2 over interior nodes
  double min_d2h = 0.0;           ///< min of h'' over interior nodes
};

MomentReport check_moment_identity(const SpaceTimeField& u, const SpaceTimeField& m, const ProblemSpec& p);

/// -1/2 int |grad m0|^2/m0 + int F(m0) - int (V - inf V) m0 with the analytic
/// gradient of the mixture; nodes with m0 < 1e-300 contribute nothing.
double compute_e0(const ProblemSpec& p, const Grid& g);

/// N/(2 e0) + sqrt(h0 / (2 e0)); requires e0 > 0.
double nonexistence_horizon(double e0, double h0, int dim);
/// sqrt(2 max(h0, hT) / e0); requires e0 > 0.
double planning_horizon(double e0, double h0, double hT);

struct Certificate {
  double e0 = 0.0;
  double h0 = 0.0;  ///< int |x - y*|^2 m0
  double hT = 0.0;  ///< planning only
  std::optional<double> T_star;
  std::optional<double> T_hat_planning;
  ConditionReport conditions;
  Point shift{0.0, 0.0};  ///< y*; zero unless optimized
  bool shift_optimized = false;

  /// True when the certificate proves there is no classical solution on [0, T].
  bool excludes(double T) const noexcept { return T_star && T > *T_star; }
};

/// With optimize_shift, h0 is minimised over translations y for which the
/// translated potential and terminal-cost conditions still hold.
Certificate compute_nonexistence_certificate(const ProblemSpec& p, const Grid& g, bool optimize_shift = false);

/// Planning problem from m0 (in p) to mT. The terminal cost in p is ignored.
Certificate compute_planning_certificate(const std::vector<GaussianComponent>& mT, const ProblemSpec& p,
                                         const Grid& g);

struct AprioriReport {
  double D = 0.0;            ///< int int mu^(2 alpha + 1)
  double two_over_q = 0.0;   ///< (alpha + 1) / (2 alpha + 1)
  double q = 0.0;
  double delta = 0.0;        ///< 4 / q
  double beta = 0.0;         ///< alpha N / 2
  double theta = 0.0;        ///< (1 - 1/beta) (alpha + 1) / alpha
  double m_exponent = 0.0;   ///< N alpha / (alpha + 1)
  double a = 0.0;            ///< 2 theta beta / (m (alpha + 1))
};

AprioriReport compute_apriori(const SpaceTimeField& mu, const ProblemSpec& p);
/// The same exponents around a D computed elsewhere.
AprioriReport apriori_exponents(const ProblemSpec& p, double D);

}  // namespace mfg
