#include "mfg/linear_parabolic.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "mfg/errors.hpp"
#include "mfg/kernels.hpp"
#include "mfg/operators.hpp"

namespace mfg {

namespace {

// A batch of independent tridiagonal systems, one per grid line along an axis.
struct LineBatch {
  int lines;
  int n;
  std::vector<double> sub, diag, sup, rhs;

  LineBatch(int lines_, int n_)
      : lines(lines_),
        n(n_),
        sub(static_cast<std::size_t>(lines_) * n_),
        diag(sub.size()),
        sup(sub.size()),
        rhs(sub.size()) {}

  std::size_t at(int line, int pos) const noexcept { return static_cast<std::size_t>(line) * n + pos; }

  void solve(kernels::Backend backend) {
    if (kernels::parallel(backend, rhs.size())) {
      kernels::omp::thomas_batch(lines, n, sub, diag, sup, rhs);
    } else {
      kernels::serial::thomas_batch(lines, n, sub, diag, sup, rhs);
    }
  }
};

int line_count(const Grid& g) noexcept { return g.dim == 1 ? 1 : g.nx; }

std::size_t line_node(const Grid& g, int axis, int line, int pos) noexcept {
  return axis == 0 ? static_cast<std::size_t>(line) * g.nx + pos : static_cast<std::size_t>(pos) * g.nx + line;
}

std::size_t line_face(const Grid& g, int axis, int line, int pos) noexcept {
  return axis == 0 ? static_cast<std::size_t>(line) * (g.nx - 1) + pos
                   : static_cast<std::size_t>(pos) * g.nx + line;
}

// Neumann second difference along one line, without the 1/dx^2 factor.
double second_diff(std::span<const double> u, const Grid& g, int axis, int line, int pos) noexcept {
  const double c = u[line_node(g, axis, line, pos)];
  if (pos == 0) return 2.0 * (u[line_node(g, axis, line, 1)] - c);
  if (pos == g.nx - 1) return 2.0 * (u[line_node(g, axis, line, pos - 1)] - c);
  return u[line_node(g, axis, line, pos + 1)] - 2.0 * c + u[line_node(g, axis, line, pos - 1)];
}

// One theta-step of -w_t = w_xx (+ c w) along `axis`, from `in` (later time) to `out`.
// c_new is the coefficient at the unknown's time level, c_old at the known one;
// both empty when the reaction term is handled by another sweep.
void backward_sweep(const Grid& g, int axis, double theta, std::span<const double> c_new,
                    std::span<const double> c_old, std::span<const double> in, std::span<double> out,
                    kernels::Backend backend) {
  const int nx = g.nx;
  const double dt = g.dt();
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double r = theta * dt * inv_dx2;
  const bool reaction = !c_new.empty();
  LineBatch batch(line_count(g), nx);
  for (int line = 0; line < batch.lines; ++line) {
    for (int pos = 0; pos < nx; ++pos) {
      const std::size_t row = batch.at(line, pos);
      const std::size_t k = line_node(g, axis, line, pos);
      batch.diag[row] = 1.0 + 2.0 * r - (reaction ? theta * dt * c_new[k] : 0.0);
      batch.sub[row] = pos == nx - 1 ? -2.0 * r : -r;
      batch.sup[row] = pos == 0 ? -2.0 * r : -r;
      double rhs = in[k];
      if (theta < 1.0) {
        double explicit_part = second_diff(in, g, axis, line, pos) * inv_dx2;
        if (reaction) explicit_part += c_old[k] * in[k];
        rhs += (1.0 - theta) * dt * explicit_part;
      }
      batch.rhs[row] = rhs;
    }
  }
  batch.solve(backend);
  for (int line = 0; line < batch.lines; ++line)
    for (int pos = 0; pos < nx; ++pos) out[line_node(g, axis, line, pos)] = batch.rhs[batch.at(line, pos)];
}

// Fitted-flux operator row on one line: (K mu)_pos = F_{pos+1/2} - F_{pos-1/2}
// with F = (B(-z) mu_left - B(z) mu_right) / dx, z = b dx.
struct FluxRow {
  double sub = 0.0;
  double diag = 0.0;
  double sup = 0.0;
};

FluxRow flux_row(const Grid& g, int axis, int line, int pos, std::span<const double> b) noexcept {
  const double dx = g.dx();
  FluxRow row;
  if (pos < g.nx - 1) {
    const double z = b[line_face(g, axis, line, pos)] * dx;
    row.diag += kernels::bernoulli(-z) / dx;
    row.sup = -kernels::bernoulli(z) / dx;
  }
  if (pos > 0) {
    const double z = b[line_face(g, axis, line, pos - 1)] * dx;
    row.diag += kernels::bernoulli(z) / dx;
    row.sub = -kernels::bernoulli(-z) / dx;
  }
  return row;
}

void forward_sweep(const Grid& g, int axis, double theta, std::span<const double> b_new,
                   std::span<const double> b_old, std::span<const double> in, std::span<double> out,
                   kernels::Backend backend) {
  const int nx = g.nx;
  const double dt = g.dt();
  const double dx = g.dx();
  LineBatch batch(line_count(g), nx);
  for (int line = 0; line < batch.lines; ++line) {
    for (int pos = 0; pos < nx; ++pos) {
      const std::size_t row = batch.at(line, pos);
      const std::size_t k = line_node(g, axis, line, pos);
      const double volume = (pos == 0 || pos == nx - 1) ? 0.5 * dx : dx;
      const double s = theta * dt / volume;
      const FluxRow kr = flux_row(g, axis, line, pos, b_new);
      batch.diag[row] = 1.0 + s * kr.diag;
      batch.sub[row] = s * kr.sub;
      batch.sup[row] = s * kr.sup;
      double rhs = in[k];
      if (theta < 1.0) {
        const FluxRow ko = flux_row(g, axis, line, pos, b_old);
        double flux = ko.diag * in[k];
        if (pos > 0) flux += ko.sub * in[line_node(g, axis, line, pos - 1)];
        if (pos < nx - 1) flux += ko.sup * in[line_node(g, axis, line, pos + 1)];
        rhs -= (1.0 - theta) * dt / volume * flux;
      }
      batch.rhs[row] = rhs;
    }
  }
  batch.solve(backend);
  for (int line = 0; line < batch.lines; ++line)
    for (int pos = 0; pos < nx; ++pos) out[line_node(g, axis, line, pos)] = batch.rhs[batch.at(line, pos)];
}

double theta_of(TimeScheme s) noexcept { return s == TimeScheme::ImplicitEuler ? 1.0 : 0.5; }

}  // namespace

BackwardHeatProblem BackwardHeatProblem::with_field(const SpaceTimeField& c, Slice terminal) {
  auto shared = std::make_shared<const SpaceTimeField>(c);
  return {[shared](int n, std::span<double> out) {
            const auto src = shared->slice(n);
            std::copy(src.begin(), src.end(), out.begin());
          },
          std::move(terminal)};
}

BackwardHeatProblem BackwardHeatProblem::with_constant(double c, Slice terminal) {
  return {[c](int, std::span<double> out) { std::fill(out.begin(), out.end(), c); }, std::move(terminal)};
}

FokkerPlanckProblem FokkerPlanckProblem::drift_free(Slice initial) {
  return {nullptr, std::move(initial)};
}

FokkerPlanckProblem FokkerPlanckProblem::constant_drift(FaceField b, Slice initial) {
  return {[b = std::move(b)](int) { return b; }, std::move(initial)};
}

FokkerPlanckProblem FokkerPlanckProblem::from_hopf_cole(const SpaceTimeField& w, Slice initial) {
  auto shared = std::make_shared<const SpaceTimeField>(w);
  return {[shared](int n) { return log_gradient_faces(shared->slice(n), shared->grid(), 2.0); },
          std::move(initial)};
}

FokkerPlanckProblem FokkerPlanckProblem::from_value(const SpaceTimeField& u, Slice initial) {
  auto shared = std::make_shared<const SpaceTimeField>(u);
  return {[shared](int n) {
            const Grid& g = shared->grid();
            const auto un = shared->slice(n);
            // exp(-u/2) turns -du into 2 d(log w) exactly.
            Slice w(un.size());
            for (std::size_t k = 0; k < un.size(); ++k) w[k] = std::exp(-0.5 * un[k]);
            return log_gradient_faces(w, g, 2.0);
          },
          std::move(initial)};
}

SpaceTimeField solve_backward_heat(const BackwardHeatProblem& p, const Grid& g, const ParabolicOptions& opt) {
  const std::size_t n_nodes = g.nodes();
  if (p.terminal.size() != n_nodes) throw SolverError("terminal value does not match the grid");
  for (double v : p.terminal)
    if (!(v > 0.0) || !std::isfinite(v)) throw PositivityError("terminal value of w must be positive and finite");

  const double theta = theta_of(opt.scheme);
  SpaceTimeField w(g);
  std::copy(p.terminal.begin(), p.terminal.end(), w.slice(g.nt).begin());

  Slice c_new(n_nodes, 0.0);
  Slice c_old(n_nodes, 0.0);
  Slice tmp(n_nodes);
  if (p.coefficient) p.coefficient(g.nt, c_old);

  for (int n = g.nt - 1; n >= 0; --n) {
    if (p.coefficient) p.coefficient(n, c_new);
    const auto later = w.slice(n + 1);
    auto now = w.slice(n);
    if (g.dim == 1) {
      backward_sweep(g, 0, theta, c_new, c_old, later, now, opt.backend);
    } else {
      backward_sweep(g, 0, theta, c_new, c_old, later, tmp, opt.backend);
      backward_sweep(g, 1, theta, {}, {}, tmp, now, opt.backend);
    }
    for (double v : now) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw PositivityError("backward heat solution lost positivity at time node " + std::to_string(n) +
                              " (time step too large for the coefficient)");
      }
    }
    std::swap(c_old, c_new);
  }
  return w;
}

SpaceTimeField solve_fokker_planck(const FokkerPlanckProblem& p, const Grid& g, const ParabolicOptions& opt) {
  const std::size_t n_nodes = g.nodes();
  if (p.initial.size() != n_nodes) throw SolverError("initial density does not match the grid");
  for (double v : p.initial)
    if (!(v >= -kNegativeDensityTolerance) || !std::isfinite(v))
      throw PositivityError("initial density must be nonnegative and finite");

  const double theta = theta_of(opt.scheme);
  const FaceField zero = FaceField::zeros(g);
  const auto drift_at = [&](int n) { return p.drift ? p.drift(n) : zero; };

  SpaceTimeField mu(g);
  std::copy(p.initial.begin(), p.initial.end(), mu.slice(0).begin());
  Slice tmp(n_nodes);
  FaceField b_old = theta < 1.0 ? drift_at(0) : FaceField{};

  for (int n = 0; n < g.nt; ++n) {
    const FaceField b_new = drift_at(n + 1);
    const auto before = mu.slice(n);
    auto after = mu.slice(n + 1);
    const auto old_comp = [&](int a) -> std::span<const double> {
      return theta < 1.0 ? std::span<const double>(b_old.comp[a]) : std::span<const double>{};
    };
    if (g.dim == 1) {
      forward_sweep(g, 0, theta, b_new.comp[0], old_comp(0), before, after, opt.backend);
    } else {
      forward_sweep(g, 0, theta, b_new.comp[0], old_comp(0), before, tmp, opt.backend);
      forward_sweep(g, 1, theta, b_new.comp[1], old_comp(1), tmp, after, opt.backend);
    }
    for (double v : after) {
      if (!(v >= -kNegativeDensityTolerance) || !std::isfinite(v)) {
        throw PositivityError("Fokker-Planck density became negative or non-finite at time node " +
                              std::to_string(n + 1));
      }
    }
    if (theta < 1.0) b_old = b_new;
  }
  return mu;
}

}  // namespace mfg
