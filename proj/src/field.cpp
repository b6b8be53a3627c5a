#include "mfg/field.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

std::size_t face_count(const Grid& g, int axis) noexcept {
  if (axis >= g.dim) return 0;
  const auto nx = static_cast<std::size_t>(g.nx);
  return g.dim == 1 ? nx - 1 : (nx - 1) * nx;
}

FaceField FaceField::zeros(const Grid& g) {
  FaceField f;
  f.dim = g.dim;
  for (int a = 0; a < g.dim; ++a) f.comp[a].assign(face_count(g, a), 0.0);
  return f;
}

SpaceTimeField::SpaceTimeField(const Grid& g, double fill)
    : grid_(g), values_(static_cast<std::size_t>(g.time_nodes()) * g.nodes(), fill) {}

bool SpaceTimeField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double SpaceTimeField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double SpaceTimeField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

}  // namespace mfg
