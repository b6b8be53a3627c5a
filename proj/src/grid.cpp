#include "mfg/grid.hpp"

#include <cmath>
#include <string>

#include "mfg/errors.hpp"
#include "mfg/field.hpp"

namespace mfg {

Grid Grid::make(int dim, double half_width, int nx, int nt, double horizon) {
  std::vector<std::string> bad;
  if (dim != 1 && dim != 2) bad.emplace_back("dim");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) bad.emplace_back("half_width");
  if (nx < 3 || nx % 2 == 0) bad.emplace_back("nx");
  if (nt < 1) bad.emplace_back("nt");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) bad.emplace_back("T");
  if (!bad.empty()) {
    std::string msg = "invalid grid parameters:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
  return Grid{dim, half_width, nx, nt, horizon};
}

Point Grid::point(std::size_t k) const noexcept {
  const int i = static_cast<int>(k % nx);
  if (dim == 1) return {coord(i), 0.0};
  return {coord(i), coord(static_cast<int>(k / nx))};
}

bool Grid::on_boundary(std::size_t k) const noexcept {
  const int i = static_cast<int>(k % nx);
  if (i == 0 || i == nx - 1) return true;
  if (dim == 1) return false;
  const int j = static_cast<int>(k / nx);
  return j == 0 || j == nx - 1;
}

double Grid::weight(std::size_t k) const noexcept {
  const auto axis_weight = [this](int idx) { return (idx == 0 || idx == nx - 1) ? 0.5 * dx() : dx(); };
  double w = axis_weight(static_cast<int>(k % nx));
  if (dim == 2) w *= axis_weight(static_cast<int>(k / nx));
  return w;
}

std::vector<double> Grid::weights() const {
  std::vector<double> w(nodes());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = weight(k);
  return w;
}

Grid Grid::refined() const { return Grid{dim, half_width, 2 * (nx - 1) + 1, 2 * nt, horizon}; }

}  // namespace mfg
