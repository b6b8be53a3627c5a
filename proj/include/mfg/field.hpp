#pragma once

#include <array>
#include <span>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

using Slice = std::vector<double>;

/// Node-valued vector field; only the first `dim` components are populated.
struct VectorField {
  int dim = 1;
  std::array<Slice, 2> comp;
};

/// Values on cell faces, one array per axis.
///
/// Axis-0 faces (i+1/2, j) are indexed j * (nx - 1) + i, axis-1 faces
/// (i, j+1/2) are indexed j * nx + i. In 1D only comp[0] is used.
struct FaceField {
  int dim = 1;
  std::array<Slice, 2> comp;

  static FaceField zeros(const Grid& g);
};

std::size_t face_count(const Grid& g, int axis) noexcept;

/// Scalar field sampled at every (time node, space node) pair.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  explicit SpaceTimeField(const Grid& g, double fill = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t nodes() const noexcept { return grid_.nodes(); }
  int time_nodes() const noexcept { return grid_.time_nodes(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<double> slice(int n) noexcept {
    return {values_.data() + static_cast<std::size_t>(n) * nodes(), nodes()};
  }
  std::span<const double> slice(int n) const noexcept {
    return {values_.data() + static_cast<std::size_t>(n) * nodes(), nodes()};
  }
  double& at(int n, std::size_t k) noexcept { return values_[static_cast<std::size_t>(n) * nodes() + k]; }
  double at(int n, std::size_t k) const noexcept { return values_[static_cast<std::size_t>(n) * nodes() + k]; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

}  // namespace mfg
