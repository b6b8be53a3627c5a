#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mfg {

using Point = std::array<double, 2>;

/// Uniform space-time lattice on [-L, L]^dim x [0, T].
///
/// Nodes are stored x-fastest: node k = j * nx + i has coordinates
/// (x_i, y_j). nx is odd so the origin is a node.
struct Grid {
  int dim = 1;
  double half_width = 12.0;
  int nx = 257;
  int nt = 100;
  double horizon = 1.0;

  /// Validating constructor; throws ConfigError on an inadmissible lattice.
  static Grid make(int dim, double half_width, int nx, int nt, double horizon);

  double dx() const noexcept { return 2.0 * half_width / (nx - 1); }
  double dt() const noexcept { return horizon / nt; }
  std::size_t nodes() const noexcept {
    return dim == 1 ? static_cast<std::size_t>(nx) : static_cast<std::size_t>(nx) * nx;
  }
  int time_nodes() const noexcept { return nt + 1; }
  double coord(int i) const noexcept { return -half_width + i * dx(); }
  double time(int n) const noexcept { return n * dt(); }
  Point point(std::size_t k) const noexcept;
  bool on_boundary(std::size_t k) const noexcept;

  /// Trapezoid quadrature weight of node k (product rule in 2D).
  double weight(std::size_t k) const noexcept;
  std::vector<double> weights() const;

  /// Same lattice with dx halved and dt halved.
  Grid refined() const;
};

}  // namespace mfg
