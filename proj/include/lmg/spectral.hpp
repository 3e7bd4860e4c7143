#pragma once

// Spectral function of the overlap amplitude, regularised by e^{-eta t}:
//   A(w) = 2 Re int_0^inf e^{i w t} e^{-eta t} O(t) dt
//        = sum_j p_j 2 eta / ((w - E_j^f)^2 + eta^2).

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/grid.hpp"
#include "lmg/quench.hpp"

namespace lmg {

inline constexpr double kDefaultBroadening = 0.05;
inline constexpr std::size_t kDefaultOmegaPoints = 2000;

struct SpectralCurve {
  std::vector<double> omega;
  std::vector<double> values;
  double eta = kDefaultBroadening;
  QuenchSpec source;
};

// [min E - margin, max E + margin] over the post-quench spectrum.
inline std::vector<double> default_omega_grid(const OverlapDistribution& d, std::size_t points = kDefaultOmegaPoints,
                                              double margin = 1.0) {
  require(!d.energies.empty(), "empty overlap distribution");
  const auto [lo, hi] = std::minmax_element(d.energies.begin(), d.energies.end());
  return linspace(*lo - margin, *hi + margin, points);
}

inline SpectralCurve spectral_function(const OverlapDistribution& d, std::span<const double> omega_grid,
                                       double eta = kDefaultBroadening) {
  require(eta > 0.0, "broadening eta must be positive");
  require(omega_grid.size() < 2 || is_ascending(omega_grid), "omega grid must be ascending");
  SpectralCurve out;
  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.values.assign(omega_grid.size(), 0.0);
  out.eta = eta;
  out.source = d.quench;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double p = d.weights[j];
    if (p == 0.0) continue;
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
      const double x = omega_grid[k] - d.energies[j];
      out.values[k] += p * 2.0 * eta / (x * x + eta * eta);
    }
  }
  return out;
}

}  // namespace lmg
