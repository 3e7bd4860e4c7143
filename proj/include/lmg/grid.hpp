#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

// `count` points from a to b inclusive.
inline std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  const double step = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + step * static_cast<double>(i);
  if (count > 1) out.back() = b;
  return out;
}

// a, a+step, ... up to b (inclusive when b lies on the lattice to within 1e-9 steps).
// Points are computed as a + k*step, never accumulated.
inline std::vector<double> arange(double a, double b, double step) {
  require(step > 0.0, "grid step must be positive");
  require(b >= a, "grid end must not precede grid start");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = a + step * static_cast<double>(k);
  return out;
}

inline bool is_ascending(std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) return false;
  }
  return true;
}

// Returns the common spacing of an ascending uniform grid. Spacings may differ
// from the mean by at most `rel_tol` relative.
inline double uniform_step(std::span<const double> grid, double rel_tol = 1e-12) {
  require(grid.size() >= 2, "uniform grid needs at least 2 points");
  require(is_ascending(grid), "grid must be strictly ascending");
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  // Spacings of a + k*step carry rounding of order eps*max|x|, so the check
  // allows that absolute slack on top of the relative tolerance.
  const double scale = std::max(std::abs(grid.front()), std::abs(grid.back()));
  const double slack = rel_tol * step + 8.0 * 2.220446049250313e-16 * scale;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs((grid[i] - grid[i - 1]) - step) > slack) {
      throw InvalidArgument("grid is not uniform (spacing at index " + std::to_string(i) +
                            " deviates from the mean step)");
    }
  }
  return step;
}

// Central first differences at interior points; result has size-2 entries.
inline std::vector<double> central_first_difference(std::span<const double> values, double step) {
  std::vector<double> out;
  if (values.size() < 3) return out;
  out.reserve(values.size() - 2);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    out.push_back((values[i + 1] - values[i - 1]) / (2.0 * step));
  }
  return out;
}

inline std::vector<double> central_second_difference(std::span<const double> values, double step) {
  std::vector<double> out;
  if (values.size() < 3) return out;
  out.reserve(values.size() - 2);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    out.push_back((values[i + 1] - 2.0 * values[i] + values[i - 1]) / (step * step));
  }
  return out;
}

}  // namespace lmg
