// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lmg/grid.hpp"
#include "lmg/model.hpp"
#include "lmg/operator_oracle.hpp"
#include "lmg/parallel.hpp"
#include "lmg/quench.hpp"
#include "lmg/spectral.hpp"
#include "lmg/statics.hpp"
#include "lmg/thermodynamics.hpp"
#include "oracles.hpp"

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.expect(false, std::string("exception: ") + e.what());
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), took.count());
  for (const auto& n : o.notes) std::printf("        %s\n", n.c_str());
  std::fflush(stdout);
}

const int kThreads = lmg::default_thread_count();

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  double r2 = 0.0;
};

Line linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    l.max_residual = std::max(l.max_residual, std::abs(r));
    ss_res += r * r;
  }
  l.r2 = 1.0 - ss_res / syy;
  return l;
}

std::size_t nearest(const std::vector<double>& grid, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - v) < std::abs(grid[best] - v)) best = i;
  }
  return best;
}

double sz_expectation(const lmg::GroundState& g) {
  const lmg::CollectiveBasis basis(static_cast<int>(g.vector.size()) - 1);
  double s = 0.0;
  for (int i = 0; i < basis.dimension(); ++i) s += basis.m(i) * g.vector(i) * g.vector(i);
  return s;
}

// Local maxima whose topographic prominence is at least min_prominence.
std::vector<std::size_t> prominent_peaks(const std::vector<double>& y, double min_prominence) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left_min = y[i], right_min = y[i];
    std::size_t k = i;
    while (k > 0 && y[k - 1] <= y[i]) left_min = std::min(left_min, y[--k]);
    k = i;
    while (k + 1 < y.size() && y[k + 1] <= y[i]) right_min = std::min(right_min, y[++k]);
    if (y[i] - std::max(left_min, right_min) >= min_prominence) out.push_back(i);
  }
  return out;
}

std::vector<lmg::ThermoSweep> g_sweeps;  // every sweep computed, for the second-law check

const lmg::ThermoSweep& sweep(int n, double gamma, double h_i) {
  for (const auto& s : g_sweeps) {
    if (s.n == n && s.gamma == gamma && s.h_initial == h_i) return s;
  }
  const auto grid = lmg::arange(0.5, 1.5, 0.01);
  g_sweeps.push_back(lmg::thermo_sweep(n, gamma, h_i, grid, kThreads));
  return g_sweeps.back();
}

std::vector<double> irreversible(const lmg::ThermoSweep& s) {
  std::vector<double> out;
  for (const auto& w : s.stats) out.push_back(w.irreversible_work);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  using lmg::QuenchSpec;

  criterion(1, "banded Hamiltonian equals dense operator construction to 1e-12", [](Outcome& o) {
    double worst = 0.0;
    for (int n : {2, 3, 10, 50, 200}) {
      for (double h : {0.0, 0.5, 1.0, 1.5}) {
        for (double g : {0.0, 0.5}) {
          const lmg::ModelParams p{n, h, g};
          const Eigen::MatrixXd diff = lmg::build_hamiltonian(p).dense() - lmg::dense_operator_hamiltonian(p);
          worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
      }
    }
    o.expect(worst <= 1e-12, fmt("max entrywise difference %.3e over 40 cases", worst));
  });

  criterion(2, "N=2 eigenvalues match -1/2 +- sqrt(4h^2+1/4), -1 to 1e-12", [](Outcome& o) {
    double worst = 0.0;
    for (double h : {0.0, 0.5, 1.5}) {
      const double r = std::sqrt(4.0 * h * h + 0.25);
      std::vector<double> expected{-0.5 - r, -1.0, -0.5 + r};
      std::sort(expected.begin(), expected.end());
      const auto e = lmg::spectrum(lmg::build_hamiltonian({2, h, 0.0}));
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(e(k) - expected[static_cast<std::size_t>(k)]));
    }
    o.expect(worst <= 1e-12, fmt("max deviation %.3e", worst));
  });

  criterion(3, "curvature minimum approaches h=1; gap at h=0.5 vanishes exponentially in N", [](Outcome& o) {
    const auto grid = lmg::arange(0.5, 1.5, lmg::kDefaultCurvatureStep);
    double previous = 1e300;
    bool nonincreasing = true;
    for (int n = 100; n <= 700; n += 100) {
      const auto c = lmg::second_derivative_energy(n, 0.0, grid, kThreads);
      const auto best = static_cast<std::size_t>(std::min_element(c.d2e.begin(), c.d2e.end()) - c.d2e.begin());
      const double dist = std::abs(c.h[best] - 1.0);
      o.note(fmt("N=%d argmin h=%.4f d2e=%.4f", n, c.h[best], c.d2e[best]));
      if (n >= 300) o.expect(dist <= 0.1 + 1e-12, fmt("N=%d |argmin-1|=%.4f <= 0.1", n, dist));
      nonincreasing = nonincreasing && dist <= previous + 1e-12;
      previous = dist;
    }
    o.expect(nonincreasing, "distance of argmin to h=1 nonincreasing over N=100..700");

    std::vector<double> ns, logs;
    for (int n = 100; n <= 700; n += 100) {
      const auto s = lmg::sector_splitting({n, 0.5, 0.0});
      ns.push_back(n);
      logs.push_back(std::log(s.gap));
      o.note(fmt("N=%d gap(h=0.5)=%.4e", n, s.gap));
    }
    const auto fit = linear_fit(ns, logs);
    o.expect(fit.slope < 0.0 && fit.r2 >= 0.99, fmt("log-linear fit slope=%.5f R^2=%.8f >= 0.99", fit.slope, fit.r2));
  });

  criterion(4, "N=400 gamma=0 h_i=1.5 window (0,10): L_min split at h_f=1", [](Outcome& o) {
    const lmg::MinimumFidelityScanner scanner(400, 0.0, 1.5, {0.0, 10.0});
    for (double hf : {1.2, 1.4}) {
      const auto p = scanner(hf);
      o.expect(p.l_min > 0.1, fmt("h_f=%.1f L_min=%.4e > 0.1", hf, p.l_min));
    }
    for (double hf : {0.6, 0.8}) {
      const auto p = scanner(hf);
      o.expect(p.l_min < 1e-3, fmt("h_f=%.1f L_min=%.4e < 1e-3 (t=%.4f)", hf, p.l_min, p.t_at_min));
    }
    std::vector<double> above;
    for (double h : lmg::FieldScan{}.points()) {
      if (h > 1.0) above.push_back(h);
    }
    const auto pts = scanner.scan(above, kThreads);
    const auto low = *std::min_element(pts.begin(), pts.end(),
                                       [](const auto& a, const auto& b) { return a.l_min < b.l_min; });
    o.expect(low.l_min > 1e-3, fmt("min over %zu scanned h_f > 1: L_min=%.4e at h_f=%.3f > 1e-3", pts.size(),
                                   low.l_min, low.h_final));
  });

  criterion(5, "h0(N) for N=100..400 increases and extrapolates to within 0.05 of 1", [](Outcome& o) {
    lmg::OrthogonalityOptions opts;
    opts.threads = kThreads;
    std::vector<std::pair<int, double>> samples;
    for (int n : {100, 200, 300, 400}) {
      const auto r = lmg::orthogonality_field(n, 0.0, 1.5, {}, opts);
      o.expect(r.has_value(), fmt("N=%d orthogonality field found", n));
      if (!r) continue;
      samples.emplace_back(n, r->h0);
      auto alt_opts = opts;
      alt_opts.threshold = 1e-4;
      const auto alt = lmg::orthogonality_field(n, 0.0, 1.5, {}, alt_opts);
      o.note(fmt("N=%d h0=%.5f (dip at %.5f, L=%.2e); threshold 1e-4 gives %s", n, r->h0, r->dip_field,
                 r->dip_l_min, alt ? fmt("%.5f", alt->h0).c_str() : "none"));
    }
    if (samples.size() != 4) return;
    bool increasing = true;
    for (std::size_t i = 1; i < samples.size(); ++i) increasing = increasing && samples[i].second > samples[i - 1].second;
    o.expect(increasing, "h0 strictly increasing in N");
    const auto fit = lmg::extrapolate_critical_field(samples);
    o.expect(std::abs(fit.a - 1.0) <= 0.05,
             fmt("extrapolated h0=%.5f (b=%.3f c=%.1f rms=%.2e), |h0-1| <= 0.05", fit.a, fit.b, fit.c,
                 fit.rms_residual));
  });

  criterion(6, "mean work is linear in h_f with slope -2<Sz> of the initial state", [](Outcome& o) {
    for (double hi : {1.5, 0.5}) {
      const auto& s = sweep(400, 0.0, hi);
      std::vector<double> w;
      double max_w = 0.0;
      for (const auto& st : s.stats) {
        w.push_back(st.mean_work);
        max_w = std::max(max_w, std::abs(st.mean_work));
      }
      const auto fit = linear_fit(s.h_final, w);
      o.expect(fit.max_residual <= 1e-8 * max_w,
               fmt("h_i=%.1f max residual %.3e <= 1e-8*max|W| = %.3e", hi, fit.max_residual, 1e-8 * max_w));
      const double expected = -2.0 * sz_expectation(lmg::ground_state(lmg::ModelParams{400, hi, 0.0}));
      const double rel = std::abs(fit.slope - expected) / std::abs(expected);
      o.expect(rel <= 1e-8, fmt("h_i=%.1f slope %.12f vs -2<Sz> %.12f (rel %.2e <= 1e-8)", hi, fit.slope, expected, rel));
    }
  });

  criterion(7, "irreversible work: reversible above h=1 from h_i=1.5, irreversible from h_i=0.5", [](Outcome& o) {
    const auto& a = sweep(400, 0.0, 1.5);
    const auto irr = irreversible(a);
    double worst = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < a.h_final.size(); ++i) {
      if (a.h_final[i] >= 1.1 - 1e-9 && a.h_final[i] <= 1.4 + 1e-9 && irr[i] > worst) {
        worst = irr[i];
        worst_h = a.h_final[i];
      }
    }
    o.expect(worst <= 1e-6, fmt("h_i=1.5: max W_irr on [1.1,1.4] = %.4e (h_f=%.2f) <= 1e-6", worst, worst_h));
    const auto slope = [&](double lo, double hi) {
      return (irr[nearest(a.h_final, hi)] - irr[nearest(a.h_final, lo)]) / (hi - lo);
    };
    const double s_low = slope(0.6, 0.9), s_high = slope(1.1, 1.4);
    o.expect(std::abs(s_low) >= 10.0 * std::abs(s_high),
             fmt("mean slope [0.6,0.9]=%.4f vs [1.1,1.4]=%.4f, ratio %.1f >= 10", s_low, s_high,
                 std::abs(s_low / s_high)));

    const auto& b = sweep(400, 0.0, 0.5);
    const auto irr_b = irreversible(b);
    const double at06 = irr_b[nearest(b.h_final, 0.6)];
    o.expect(at06 > 1e-3, fmt("h_i=0.5: W_irr(0.6) = %.4e > 1e-3", at06));
    std::vector<double> x, y;
    for (std::size_t i = 0; i < b.h_final.size(); ++i) {
      if (b.h_final[i] >= 1.1 - 1e-9 && b.h_final[i] <= 1.4 + 1e-9) {
        x.push_back(b.h_final[i]);
        y.push_back(irr_b[i]);
      }
    }
    const auto fit = linear_fit(x, y);
    const double range = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());
    o.expect(fit.max_residual <= 0.05 * range,
             fmt("h_i=0.5: linear residual on [1.1,1.4] %.3e <= 5%% of range %.3e", fit.max_residual, range));
  });

  criterion(8, "second law: W_irr >= -1e-10 on every computed quench", [](Outcome& o) {
    for (double g : {0.0, 0.5}) {
      for (double hi : {1.5, 0.5}) sweep(400, g, hi);
    }
    double worst = 1e300;
    std::size_t count = 0;
    for (const auto& s : g_sweeps) {
      for (const auto& w : s.stats) {
        worst = std::min(worst, w.irreversible_work);
        ++count;
      }
    }
    o.expect(worst >= -1e-10, fmt("min W_irr over %zu quenches = %.3e", count, worst));
  });

  criterion(9, "N=400 h_i=0.5: orthogonality for all h_f, decaying revivals at h_f=1.4", [](Outcome& o) {
    const lmg::MinimumFidelityScanner scanner(400, 0.0, 0.5, {0.0, 10.0});
    for (double hf : {0.8, 1.0, 1.2, 1.4}) {
      const auto p = scanner(hf);
      o.expect(p.l_min < 1e-3, fmt("h_f=%.1f L_min=%.3e < 1e-3", hf, p.l_min));
    }
    const auto d = lmg::overlap_distribution(QuenchSpec{400, 0.0, 0.5, 1.4});
    const auto times = lmg::linspace(0.0, 10.0, 20001);
    const auto series = lmg::fidelity_series(d, times);
    double peak = 0.0, peak_t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] > 1.0 && series.values[i] > peak) {
        peak = series.values[i];
        peak_t = times[i];
      }
    }
    o.expect(peak < 0.5, fmt("max L on (1,10) = %.4f at t=%.3f < 0.5", peak, peak_t));
    std::vector<double> heights;
    std::string listing;
    for (std::size_t i : prominent_peaks(series.values, 0.05)) {
      if (times[i] <= 1.0) continue;
      heights.push_back(series.values[i]);
      listing += fmt(" %.3f@%.2f", series.values[i], times[i]);
    }
    bool nonincreasing = !heights.empty();
    for (std::size_t i = 1; i < heights.size(); ++i) nonincreasing = nonincreasing && heights[i] <= heights[i - 1];
    o.expect(nonincreasing, "revival peaks (prominence >= 0.05) nonincreasing:" + listing);
  });

  criterion(10, "opposite-parity overlap weight <= 1e-20 per level", [](Outcome& o) {
    double worst = 0.0;
    int quenches = 0;
    for (double g : {0.0, 0.5}) {
      for (int n : {2, 7, 50, 101, 400}) {
        for (double hi : {0.0, 0.5, 1.5}) {
          for (double hf : {0.0, 0.5, 0.6, 1.0, 1.4, 1.5}) {
            const auto d = lmg::overlap_distribution(QuenchSpec{n, g, hi, hf});
            for (std::size_t j = 0; j < d.size(); ++j) {
              if (d.parity[j] != d.initial_parity) worst = std::max(worst, d.weights[j]);
            }
            ++quenches;
          }
        }
      }
    }
    o.expect(worst <= 1e-20, fmt("max opposite-parity weight %.3e over %d quenches", worst, quenches));
  });

  criterion(11, "Lorentzian spectral function matches damped-integral quadrature; sum rule; no-quench peak",
            [](Outcome& o) {
              const double eta = lmg::kDefaultBroadening;
              for (double hi : {0.5, 1.5}) {
                for (double hf : {0.6, 1.0, 1.4}) {
                  const auto d = lmg::overlap_distribution(QuenchSpec{50, 0.0, hi, hf});
                  const auto omega = lmg::default_omega_grid(d);
                  const auto closed = lmg::spectral_function(d, omega, eta);

                  // Centre the spectrum so the integrand oscillates as slowly as possible.
                  const double centre = 0.5 * (omega.front() + omega.back());
                  auto shifted = d;
                  for (auto& e : shifted.energies) e -= centre;
                  const double reach = 0.5 * (omega.back() - omega.front());
                  const lmg::oracle::DampedIntegral integral(shifted, eta, 20.0 / eta, 0.1 / reach);
                  std::vector<double> quad(omega.size());
                  lmg::parallel_for(omega.size(), kThreads,
                                    [&](std::size_t k) { quad[k] = integral(omega[k] - centre); });
                  double worst = 0.0;
                  for (std::size_t k = 0; k < omega.size(); ++k) {
                    worst = std::max(worst, std::abs(quad[k] - closed.values[k]) / std::abs(closed.values[k]));
                  }
                  o.expect(worst <= 1e-4, fmt("h_i=%.1f h_f=%.1f: max relative deviation %.2e on %zu points", hi,
                                              hf, worst, omega.size()));

                  const double lo = d.energies.front() - 1000.0 * eta, top = d.energies.back() + 1000.0 * eta;
                  const auto wide = lmg::linspace(lo, top, static_cast<std::size_t>((top - lo) / (0.1 * eta)) + 1);
                  const auto a = lmg::spectral_function(d, wide, eta).values;
                  const double step = wide[1] - wide[0];
                  double total = 0.0;
                  for (std::size_t k = 0; k < a.size(); ++k) total += (k == 0 || k + 1 == a.size() ? 0.5 : 1.0) * a[k];
                  total *= step;
                  const double rel = std::abs(total / (2.0 * std::numbers::pi) - 1.0);
                  o.expect(rel <= 0.01, fmt("h_i=%.1f h_f=%.1f: integral of A = 2pi * %.6f", hi, hf, total / (2.0 * std::numbers::pi)));
                }
              }
              for (double h : {0.5, 1.5}) {
                const auto d = lmg::overlap_distribution(QuenchSpec{50, 0.0, h, h});
                const auto omega = lmg::default_omega_grid(d);
                const auto a = lmg::spectral_function(d, omega, eta).values;
                std::vector<std::size_t> maxima;
                for (std::size_t k = 1; k + 1 < a.size(); ++k) {
                  if (a[k] > a[k - 1] && a[k] >= a[k + 1]) maxima.push_back(k);
                }
                const bool single = maxima.size() == 1;
                const double where = single ? omega[maxima.front()] : std::nan("");
                o.expect(single && std::abs(where - d.ground_energy_initial) <= eta,
                         fmt("no quench at h=%.1f: %zu peak(s), at %.5f vs E0=%.5f", h, maxima.size(), where,
                             d.ground_energy_initial));
              }
            });

  criterion(12, "random rotations inside degenerate groups change L(t) by < 1e-8 (N=400, h_f=0.5)", [](Outcome& o) {
    const auto times = lmg::linspace(0.0, 10.0, 2001);
    for (double hi : {1.5, 0.5}) {
      const QuenchSpec q{400, 0.0, hi, 0.5};
      const auto initial = lmg::ground_state(q.initial());
      const auto post = lmg::diagonalize(lmg::build_hamiltonian(q.final_params()));
      const auto reference = lmg::fidelity_series(lmg::overlap_distribution(initial, post, q), times).values;
      std::size_t groups = 0;
      for (const auto& [b, e] : post.degenerate_groups()) groups += (e - b > 1) ? 1 : 0;
      double worst = 0.0;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rotated = lmg::oracle::rotate_degenerate_groups(post, seed);
        const auto other = lmg::fidelity_series(lmg::overlap_distribution(initial, rotated, q), times).values;
        for (std::size_t k = 0; k < times.size(); ++k) worst = std::max(worst, std::abs(other[k] - reference[k]));
      }
      o.expect(worst < 1e-8, fmt("h_i=%.1f: %zu degenerate groups, max |dL| = %.3e over 5 rotations", hi, groups,
                                 worst));
    }
  });

  criterion(13, "N<=6 closed-form L(t) equals dense time propagation to 1e-8 on [0,10]", [](Outcome& o) {
    double worst = 0.0;
    int cases = 0;
    const auto times = lmg::linspace(0.0, 10.0, 101);
    for (int n = 2; n <= 6; ++n) {
      for (double g : {0.0, 0.5}) {
        for (const auto& [hi, hf] : std::vector<std::pair<double, double>>{{1.5, 0.6}, {0.5, 1.4}, {1.5, 1.2}, {0.5, 0.8}}) {
          const QuenchSpec q{n, g, hi, hf};
          const auto closed = lmg::fidelity_series(lmg::overlap_distribution(q), times).values;
          for (std::size_t k = 0; k < times.size(); ++k) {
            worst = std::max(worst, std::abs(closed[k] - lmg::oracle::propagated_fidelity(q, times[k])));
          }
          ++cases;
        }
      }
    }
    o.expect(worst <= 1e-8, fmt("max |dL| = %.3e over %d quenches x 101 times", worst, cases));
  });

  criterion(14, "gamma=0.5, window (0,12), N=100..300: same split; h0 extrapolation reported", [](Outcome& o) {
    const lmg::TimeWindow window{0.0, 12.0};
    const auto fields = lmg::FieldScan{}.points();
    std::vector<std::pair<int, double>> samples;
    for (int n : {100, 200, 300}) {
      const lmg::MinimumFidelityScanner scanner(n, 0.5, 1.5, window);
      const auto pts = scanner.scan(fields, kThreads);
      double min_above = 1.0, min_below = 1.0;
      for (const auto& p : pts) {
        if (p.h_final > 1.0) min_above = std::min(min_above, p.l_min);
        else min_below = std::min(min_below, p.l_min);
      }
      o.expect(min_above > 1e-3, fmt("N=%d min L_min over h_f > 1 = %.3e > 1e-3", n, min_above));
      o.expect(min_below < 1e-3, fmt("N=%d min L_min over h_f < 1 = %.3e < 1e-3", n, min_below));
      for (double hf : {0.6, 0.8}) o.note(fmt("N=%d h_f=%.1f L_min=%.3e", n, hf, scanner(hf).l_min));

      lmg::OrthogonalityOptions opts;
      opts.window = window;
      opts.threads = kThreads;
      const auto r = lmg::orthogonality_field(n, 0.5, 1.5, {}, opts);
      o.expect(r.has_value() && r->h0 < 1.0, fmt("N=%d h0 found below 1: %s", n, r ? fmt("%.5f", r->h0).c_str() : "none"));
      if (r) samples.emplace_back(n, r->h0);
    }
    if (samples.size() == 3) {
      const auto fit = lmg::extrapolate_critical_field(samples);
      o.note(fmt("extrapolated h0=%.5f, residuals %.2e %.2e %.2e (exact with 3 sizes)", fit.a, fit.residuals[0],
                 fit.residuals[1], fit.residuals[2]));
    }
  });

  criterion(15, "CLI output is byte-identical across thread counts", [](Outcome& o) {
    namespace fs = std::filesystem;
    const std::vector<std::vector<std::string>> runs{
        {"spectrum", "--N", "200", "--h", "0.5", "--dump-matrix"},
        {"gap", "--N", "200", "--hmin", "0", "--hmax", "2", "--dh", "0.02"},
        {"curvature", "--N", "100,200", "--hmin", "0.5", "--hmax", "1.5", "--dh", "0.01"},
        {"tdf", "--N", "400", "--hi", "1.5", "--hf", "0.6,1.2,1.4", "--tmax", "10"},
        {"lmin-scan", "--N", "200", "--hi", "1.5", "--hfmin", "0.5", "--hfmax", "1.5", "--dhf", "0.05"},
        {"h0-scaling", "--N", "40,60,80", "--hi", "1.5"},
        {"work-sweep", "--N", "400", "--hi", "0.5"},
        {"spectral", "--N", "50", "--hi", "1.5", "--hf", "0.6,1.0,1.4"},
    };
    const fs::path root = fs::temp_directory_path() / "lmg_acceptance_threads";
    for (const auto& args : runs) {
      std::vector<std::string> outputs;
      for (int threads : {1, 2, 5}) {
        const fs::path dir = root / std::to_string(threads);
        fs::remove_all(dir);
        auto full = args;
        full.insert(full.end(), {"--threads", std::to_string(threads), "--out", dir.string()});
        std::ostringstream out, err;
        const int code = lmg::cli::parse_and_dispatch(full, out, err);
        if (code != 0) {
          o.expect(false, args.front() + " exited with " + std::to_string(code) + ": " + err.str());
          break;
        }
        std::string all;
        for (const auto& entry : fs::directory_iterator(dir)) {
          if (entry.path().extension() == ".csv") all += entry.path().filename().string() + "\n" + slurp(entry.path());
        }
        outputs.push_back(all);
      }
      if (outputs.size() == 3) {
        o.expect(outputs[0] == outputs[1] && outputs[0] == outputs[2],
                 fmt("%s: threads 1, 2, 5 give identical CSV (%zu bytes)", args.front().c_str(), outputs[0].size()));
      }
    }
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
