#pragma once

// Sudden quench h_i -> h_f from the initial ground state. All time dependence
// goes through the spectral decomposition of the post-quench Hamiltonian:
//
//   O(t) = <psi_0^i| exp(-i H_f t) |psi_0^i> = sum_j p_j exp(-i E_j^f t),
//   p_j  = |<psi_0^i|psi_j^f>|^2,   L(t) = |O(t)|^2.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/golden.hpp"
#include "lmg/grid.hpp"
#include "lmg/model.hpp"
#include "lmg/parallel.hpp"

namespace lmg {

struct QuenchSpec {
  int n = 2;
  double gamma = 0.0;
  double h_initial = 0.0;
  double h_final = 0.0;

  ModelParams initial() const { return {n, h_initial, gamma}; }
  ModelParams final_params() const { return {n, h_final, gamma}; }
  void validate() const {
    initial().validate();
    final_params().validate();
  }
};

struct OverlapDistribution {
  std::vector<double> energies;  // post-quench eigenvalues, ascending
  std::vector<double> weights;   // p_j
  std::vector<int> parity;       // parity of each post-quench eigenstate
  double ground_energy_initial = 0.0;
  double ground_energy_final = 0.0;
  int initial_parity = +1;
  QuenchSpec quench;

  std::size_t size() const { return energies.size(); }
  double total_weight() const {
    double s = 0.0;
    for (double p : weights) s += p;
    return s;
  }
};

inline OverlapDistribution overlap_distribution(const GroundState& initial, const EigenDecomposition& post,
                                                QuenchSpec quench = {}) {
  require(initial.vector.size() == post.vectors.rows(), "initial state and post-quench basis differ in dimension");
  OverlapDistribution d;
  const auto size = static_cast<std::size_t>(post.size());
  d.energies.resize(size);
  d.weights.resize(size);
  d.parity = post.parity;
  const Eigen::VectorXd amplitudes = post.vectors.transpose() * initial.vector;
  for (std::size_t j = 0; j < size; ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    d.energies[j] = post.energies(k);
    d.weights[j] = amplitudes(k) * amplitudes(k);
  }
  d.ground_energy_initial = initial.energy;
  d.ground_energy_final = post.energies(0);
  d.initial_parity = initial.parity;
  d.quench = quench;
  return d;
}

inline OverlapDistribution overlap_distribution(const QuenchSpec& q) {
  q.validate();
  const auto initial = ground_state(q.initial());
  const auto post = diagonalize(build_hamiltonian(q.final_params()));
  return overlap_distribution(initial, post, q);
}

inline std::complex<double> overlap_amplitude(const OverlapDistribution& d, double t) {
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d.weights[j] == 0.0) continue;
    const double phase = -d.energies[j] * t;
    sum += d.weights[j] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum;
}

// Evaluates L(t) from the levels with nonzero weight. Energies are measured
// from the post-quench ground energy, which leaves |O| unchanged and keeps
// the phases small.
class FidelityEvaluator {
 public:
  explicit FidelityEvaluator(const OverlapDistribution& d) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d.weights[j] == 0.0) continue;
      energies_.push_back(d.energies[j] - d.ground_energy_final);
      weights_.push_back(d.weights[j]);
    }
  }

  double operator()(double t) const {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < energies_.size(); ++j) {
      const double phase = energies_[j] * t;
      re += weights_[j] * std::cos(phase);
      im -= weights_[j] * std::sin(phase);
    }
    return re * re + im * im;
  }

  std::size_t active_levels() const { return energies_.size(); }

 private:
  std::vector<double> energies_;
  std::vector<double> weights_;
};

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> values;
};

inline FidelitySeries fidelity_series(const OverlapDistribution& d, std::span<const double> t_grid) {
  require(t_grid.size() < 2 || is_ascending(t_grid), "time grid must be ascending");
  const FidelityEvaluator eval(d);
  FidelitySeries out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.values.reserve(t_grid.size());
  for (double t : t_grid) out.values.push_back(eval(t));
  return out;
}

struct TimeWindow {
  double t_min = 0.0;
  double t_max = 10.0;
};

struct MinimumSearchOptions {
  int grid_points = 4000;
  double time_tolerance = 1e-6;
};

struct FidelityMinimum {
  double value = 1.0;
  double time = 0.0;
};

inline void validate_window(const TimeWindow& w) {
  require(std::isfinite(w.t_min) && std::isfinite(w.t_max) && w.t_min >= 0.0 && w.t_min < w.t_max,
          "time window must satisfy 0 <= t_min < t_max");
}

// Coarse grid scan followed by golden-section refinement around the best grid point.
inline FidelityMinimum minimum_fidelity(const FidelityEvaluator& eval, TimeWindow window,
                                        MinimumSearchOptions opts = {}) {
  validate_window(window);
  require(opts.grid_points >= 3, "minimum search needs at least 3 grid points");
  require(opts.time_tolerance > 0.0, "time tolerance must be positive");
  const auto grid = linspace(window.t_min, window.t_max, static_cast<std::size_t>(opts.grid_points));
  std::size_t best = 0;
  double best_value = eval(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double v = eval(grid[k]);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const auto refined = golden_section_minimize(eval, lo, hi, opts.time_tolerance);
  if (refined.value < best_value) return {refined.value, refined.x};
  return {best_value, grid[best]};
}

inline FidelityMinimum minimum_fidelity(const OverlapDistribution& d, TimeWindow window,
                                        MinimumSearchOptions opts = {}) {
  return minimum_fidelity(FidelityEvaluator(d), window, opts);
}

struct ScanPoint {
  double h_final = 0.0;
  double l_min = 1.0;
  double t_at_min = 0.0;
};

// L_min(h_f) for a fixed initial ground state; the initial state is computed once.
class MinimumFidelityScanner {
 public:
  MinimumFidelityScanner(int n, double gamma, double h_initial, TimeWindow window, MinimumSearchOptions opts = {})
      : n_(n), gamma_(gamma), h_initial_(h_initial), window_(window), opts_(opts) {
    ModelParams{n, h_initial, gamma}.validate();
    validate_window(window);
    initial_ = ground_state(ModelParams{n, h_initial, gamma});
  }

  ScanPoint operator()(double h_final) const {
    const QuenchSpec q{n_, gamma_, h_initial_, h_final};
    q.final_params().validate();
    const auto post = diagonalize(build_hamiltonian(q.final_params()));
    const auto d = overlap_distribution(initial_, post, q);
    const auto m = minimum_fidelity(d, window_, opts_);
    return {h_final, m.value, m.time};
  }

  std::vector<ScanPoint> scan(std::span<const double> h_finals, int threads = 1) const {
    std::vector<ScanPoint> out(h_finals.size());
    parallel_for(h_finals.size(), threads, [&](std::size_t i) { out[i] = (*this)(h_finals[i]); });
    return out;
  }

  const GroundState& initial_state() const { return initial_; }

 private:
  int n_;
  double gamma_;
  double h_initial_;
  TimeWindow window_;
  MinimumSearchOptions opts_;
  GroundState initial_;
};

inline std::vector<ScanPoint> lmin_scan(int n, double gamma, double h_initial, std::span<const double> h_finals,
                                        TimeWindow window = {}, MinimumSearchOptions opts = {}, int threads = 1) {
  return MinimumFidelityScanner(n, gamma, h_initial, window, opts).scan(h_finals, threads);
}

// h_f values visited by an orthogonality scan: start, start +- step, ... toward end.
struct FieldScan {
  double start = 1.4;
  double end = 0.5;
  double step = 0.005;

  std::vector<double> points() const {
    require(step > 0.0 && std::isfinite(start) && std::isfinite(end), "field scan needs a positive step");
    const double dir = end >= start ? 1.0 : -1.0;
    const auto count = static_cast<std::size_t>(std::floor(std::abs(end - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = start + dir * step * static_cast<double>(k);
    return out;
  }
};

struct OrthogonalityOptions {
  TimeWindow window{};
  double threshold = 1e-3;
  MinimumSearchOptions search{};
  int threads = 1;
};

struct OrthogonalityResult {
  double h0 = 0.0;          // first field (in scan order) with L_min <= threshold
  double l_min_at_h0 = 0.0;
  double dip_field = 0.0;   // located minimum of L_min(h_f) of the dip that crossed
  double dip_l_min = 0.0;
  std::vector<ScanPoint> scan;  // scan points evaluated up to the crossing
};

// Walks the field scan in order. A scan point at or below the threshold is a
// crossing; a strict local minimum of L_min between scan points is refined by
// golden section in h_f, since the orthogonal dips are much narrower than the
// scan step. The crossing is then located by bisection to step/100 between the
// last point above threshold and the first point found below it.
inline std::optional<OrthogonalityResult> orthogonality_field(int n, double gamma, double h_initial, FieldScan scan,
                                                              OrthogonalityOptions opts = {}) {
  require(opts.threshold > 0.0, "orthogonality threshold must be positive");
  const auto fields = scan.points();
  const MinimumFidelityScanner scanner(n, gamma, h_initial, opts.window, opts.search);
  const double resolution = scan.step / 100.0;
  const auto below = [&](double h) { return scanner(h).l_min <= opts.threshold; };

  auto bisect = [&](double above_h, double below_h) {
    while (std::abs(below_h - above_h) > resolution) {
      const double mid = 0.5 * (above_h + below_h);
      if (below(mid)) {
        below_h = mid;
      } else {
        above_h = mid;
      }
    }
    return below_h;
  };

  auto finish = [&](std::vector<ScanPoint> trace, double h0, double dip_h, double dip_value) {
    OrthogonalityResult r;
    const auto at_h0 = scanner(h0);
    r.h0 = h0;
    r.l_min_at_h0 = at_h0.l_min;
    r.dip_field = dip_h;
    r.dip_l_min = dip_value;
    r.scan = std::move(trace);
    return r;
  };

  // Scan points are evaluated speculatively in chunks; the walk itself is
  // sequential, so the answer does not depend on the chunk size.
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, opts.threads)) * 4;
  std::vector<ScanPoint> values;
  values.reserve(fields.size());
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k == values.size()) {
      const std::size_t end = std::min(fields.size(), k + chunk);
      const auto block = scanner.scan(std::span<const double>(fields).subspan(k, end - k), opts.threads);
      values.insert(values.end(), block.begin(), block.end());
    }
    const double lk = values[k].l_min;

    if (k >= 2) {
      const double prev = values[k - 1].l_min;
      if (prev < values[k - 2].l_min && prev < lk) {
        const auto dip = golden_section_minimize([&](double h) { return scanner(h).l_min; }, fields[k - 2],
                                                 fields[k], resolution);
        if (dip.value <= opts.threshold) {
          std::vector<ScanPoint> trace(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k + 1));
          return finish(std::move(trace), bisect(fields[k - 2], dip.x), dip.x, dip.value);
        }
      }
    }
    if (lk <= opts.threshold) {
      std::vector<ScanPoint> trace(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k + 1));
      const double h0 = k == 0 ? fields[0] : bisect(fields[k - 1], fields[k]);
      return finish(std::move(trace), h0, fields[k], lk);
    }
  }
  return std::nullopt;
}

struct ScalingResult {
  std::vector<std::pair<int, double>> samples;  // (N, h0)
  double a = 0.0;                               // h0 at N -> infinity
  double b = 0.0;
  double c = 0.0;
  std::vector<double> residuals;  // h0 - fit, per sample
  double rms_residual = 0.0;

  double extrapolation() const { return a; }
  double evaluate(double n) const {
    const double x = 1.0 / n;
    return a + b * x + c * x * x;
  }
};

// Least-squares fit h0 = a + b x + c x^2 with x = 1/N.
inline ScalingResult extrapolate_critical_field(std::span<const std::pair<int, double>> samples) {
  require(samples.size() >= 3, "finite-size extrapolation needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].first > 0, "sample sizes must be positive");
    for (std::size_t k = i + 1; k < samples.size(); ++k) {
      require(samples[i].first != samples[k].first,
              "repeated system size N=" + std::to_string(samples[i].first) + " in scaling samples");
    }
  }
  const auto rows = static_cast<Eigen::Index>(samples.size());
  double x_scale = 0.0;
  for (const auto& s : samples) x_scale = std::max(x_scale, 1.0 / s.first);

  // Columns are scaled to O(1) before the QR solve.
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double u = (1.0 / samples[static_cast<std::size_t>(r)].first) / x_scale;
    design(r, 0) = 1.0;
    design(r, 1) = u;
    design(r, 2) = u * u;
    rhs(r) = samples[static_cast<std::size_t>(r)].second;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

  ScalingResult out;
  out.samples.assign(samples.begin(), samples.end());
  out.a = coef(0);
  out.b = coef(1) / x_scale;
  out.c = coef(2) / (x_scale * x_scale);
  double ss = 0.0;
  for (const auto& s : samples) {
    const double r = s.second - out.evaluate(s.first);
    out.residuals.push_back(r);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / static_cast<double>(samples.size()));
  return out;
}

}  // namespace lmg
