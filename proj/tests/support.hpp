#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"

namespace testing_support {

inline double gaussian(double x, double mean, double var) {
  return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

template <class Fn>
mfg::Slice sample(const mfg::Grid& g, Fn fn) {
  mfg::Slice s(g.nodes());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = fn(g.point(k));
  return s;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double l1_diff(std::span<const double> a, std::span<const double> b, const mfg::Grid& g) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += g.weight(k) * std::abs(a[k] - b[k]);
  return acc;
}

inline double slope(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

}  // namespace testing_support
