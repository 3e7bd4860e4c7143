#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/grid.hpp"
#include "lmg/model.hpp"
#include "lmg/parallel.hpp"

namespace lmg {

inline constexpr int kDefaultGapLevels = 5;
inline constexpr double kDefaultCurvatureStep = 0.01;

struct GapCurve {
  int n = 0;
  double gamma = 0.0;
  int levels = 0;
  std::vector<double> h;
  std::vector<std::vector<double>> gaps;  // gaps[i][k-1] = E_k - E_0 at h[i]
};

inline GapCurve gap_curve(int n, double gamma, std::span<const double> h_grid, int levels = kDefaultGapLevels,
                          int threads = 1) {
  require(levels >= 0 && levels <= n, "number of gap levels K must satisfy 0 <= K <= N");
  require(h_grid.size() < 2 || is_ascending(h_grid), "h grid must be ascending");
  for (double h : h_grid) ModelParams{n, h, gamma}.validate();

  GapCurve out;
  out.n = n;
  out.gamma = gamma;
  out.levels = levels;
  out.h.assign(h_grid.begin(), h_grid.end());
  out.gaps.resize(h_grid.size());
  parallel_for(h_grid.size(), threads, [&](std::size_t i) {
    Eigen::VectorXd e;
    try {
      e = spectrum(build_hamiltonian({n, h_grid[i], gamma}));
    } catch (const NumericalError& err) {
      throw NumericalError(std::string(err.what()) + " in gap curve at h=" + std::to_string(h_grid[i]));
    }
    auto& row = out.gaps[i];
    row.resize(static_cast<std::size_t>(levels));
    for (int k = 1; k <= levels; ++k) row[static_cast<std::size_t>(k - 1)] = e(k) - e(0);
  });
  return out;
}

struct CurvatureCurve {
  int n = 0;
  double gamma = 0.0;
  std::vector<double> h;    // interior grid points
  std::vector<double> d2e;  // d^2 (E_0/N) / dh^2
};

// Second differences of E_0/N given ground energies on a uniform grid.
inline CurvatureCurve curvature_from_energies(int n, double gamma, std::span<const double> h_grid,
                                              std::span<const double> ground_energies) {
  require(h_grid.size() >= 3, "curvature needs at least 3 grid points");
  require(h_grid.size() == ground_energies.size(), "grid and energy lengths differ");
  const double step = uniform_step(h_grid);
  std::vector<double> per_site(ground_energies.size());
  for (std::size_t i = 0; i < per_site.size(); ++i) per_site[i] = ground_energies[i] / n;
  CurvatureCurve out;
  out.n = n;
  out.gamma = gamma;
  out.h.assign(h_grid.begin() + 1, h_grid.end() - 1);
  out.d2e = central_second_difference(per_site, step);
  return out;
}

inline CurvatureCurve second_derivative_energy(int n, double gamma, std::span<const double> h_grid, int threads = 1) {
  require(h_grid.size() >= 3, "curvature needs at least 3 grid points");
  uniform_step(h_grid);
  for (double h : h_grid) ModelParams{n, h, gamma}.validate();
  std::vector<double> energies(h_grid.size());
  parallel_for(h_grid.size(), threads, [&](std::size_t i) {
    try {
      energies[i] = ground_energy(build_hamiltonian({n, h_grid[i], gamma}));
    } catch (const NumericalError& err) {
      throw NumericalError(std::string(err.what()) + " in curvature at h=" + std::to_string(h_grid[i]));
    }
  });
  return curvature_from_energies(n, gamma, h_grid, energies);
}

// --- extended precision -----------------------------------------------------
//
// For h < 1 the lowest even and odd levels split by an amount exponentially
// small in N (around 1e-19 at N=100 and 1e-77 at N=400 for h=0.5), far below
// double resolution of energies of order N. The sector minima are therefore
// found by Sturm-sequence bisection in multiprecision arithmetic.

namespace detail {

template <typename Real>
struct SectorTridiagonal {
  std::vector<Real> diag;
  std::vector<Real> off;
};

template <typename Real>
SectorTridiagonal<Real> sector_tridiagonal(const ModelParams& p, int sector) {
  const CollectiveBasis basis(p.n);
  const Real n = p.n;
  const Real j = n / 2;
  const Real jj = j * (j + 1);
  const Real gamma = p.gamma;
  const Real h = p.h;
  SectorTridiagonal<Real> t;
  for (int i = sector; i <= p.n; i += 2) {
    const Real m = Real(2 * i - p.n) / 2;
    t.diag.push_back(-(1 + gamma) * (jj - m * m) / n - 2 * h * m);
    if (i + 2 <= p.n) {
      const Real first = (j - m) * (j + m + 1);
      const Real second = (j - m - 1) * (j + m + 2);
      t.off.push_back(-(1 - gamma) / (2 * n) * sqrt(first * second));
    }
  }
  return t;
}

// Number of eigenvalues strictly below x.
template <typename Real>
int sturm_count(const SectorTridiagonal<Real>& t, const Real& x, const Real& pivot_floor) {
  int count = 0;
  Real q = t.diag[0] - x;
  for (std::size_t k = 0;; ++k) {
    if (q < 0) ++count;
    if (k + 1 == t.diag.size()) break;
    if (abs(q) < pivot_floor) q = -pivot_floor;
    q = t.diag[k + 1] - x - t.off[k] * t.off[k] / q;
  }
  return count;
}

template <typename Real>
Real lowest_eigenvalue(const SectorTridiagonal<Real>& t, int bits) {
  Real lo = t.diag[0];
  Real hi = t.diag[0];
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    Real radius = 0;
    if (k > 0) radius += abs(t.off[k - 1]);
    if (k < t.off.size()) radius += abs(t.off[k]);
    lo = std::min<Real>(lo, t.diag[k] - radius);
    hi = std::max<Real>(hi, t.diag[k] + radius);
  }
  const Real scale = std::max<Real>(abs(lo), abs(hi)) + 1;
  const Real pivot_floor = scale * ldexp(Real(1), -bits);
  const Real resolution = scale * ldexp(Real(1), -(bits - 8));
  while (hi - lo > resolution) {
    const Real mid = (lo + hi) / 2;
    if (sturm_count(t, mid, pivot_floor) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace detail

struct SectorSplitting {
  double ground_energy = 0.0;
  int ground_parity = +1;
  double gap = 0.0;  // lowest level of the other parity sector minus the ground energy
};

// Gap between the lowest levels of the two parity sectors, resolved in
// 250-digit arithmetic. This is the ground-to-first-excited gap whenever the
// first excited state has opposite parity (always the case for gamma = 0).
inline SectorSplitting sector_splitting(const ModelParams& params) {
  params.validate();
  using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;
  const int bits = std::numeric_limits<Real>::digits;
  const Real even = detail::lowest_eigenvalue(detail::sector_tridiagonal<Real>(params, 0), bits);
  const Real odd = detail::lowest_eigenvalue(detail::sector_tridiagonal<Real>(params, 1), bits);
  // Bisection resolves each level to about scale * 2^-(bits-8); a splitting
  // within a few of those steps is noise.
  const Real scale = abs(even) + abs(odd) + 1;
  if (abs(even - odd) < scale * ldexp(Real(1), -(bits - 16))) {
    throw NumericalError("parity splitting at N=" + std::to_string(params.n) + ", h=" + std::to_string(params.h) +
                         " is below the resolution of the extended-precision solver");
  }
  SectorSplitting out;
  if (even <= odd) {
    out.ground_energy = static_cast<double>(even);
    out.ground_parity = +1;
    out.gap = static_cast<double>(Real(odd - even));
  } else {
    out.ground_energy = static_cast<double>(odd);
    out.ground_parity = -1;
    out.gap = static_cast<double>(Real(even - odd));
  }
  return out;
}

}  // namespace lmg
