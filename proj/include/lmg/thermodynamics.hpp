#pragma once

// Work statistics of a sudden quench starting in the ground state:
//   <W>      = sum_j (E_j^f - E_0^i) p_j
//   dF       = E_0^f - E_0^i            (closed dynamics at zero temperature)
//   <W_irr>  = <W> - dF

#include <cstddef>
#include <span>
#include <vector>

#include "lmg/grid.hpp"
#include "lmg/model.hpp"
#include "lmg/parallel.hpp"
#include "lmg/quench.hpp"

namespace lmg {

struct WorkStats {
  double mean_work = 0.0;
  double delta_f = 0.0;
  double irreversible_work = 0.0;
};

inline WorkStats work_stats(const OverlapDistribution& d) {
  WorkStats w;
  for (std::size_t j = 0; j < d.size(); ++j) {
    w.mean_work += (d.energies[j] - d.ground_energy_initial) * d.weights[j];
  }
  w.delta_f = d.ground_energy_final - d.ground_energy_initial;
  w.irreversible_work = w.mean_work - w.delta_f;
  return w;
}

inline WorkStats work_stats(const QuenchSpec& q) { return work_stats(overlap_distribution(q)); }

struct ThermoSweep {
  int n = 0;
  double gamma = 0.0;
  double h_initial = 0.0;
  std::vector<double> h_final;
  std::vector<WorkStats> stats;
  // Central differences on the grid interior (h_final[1] .. h_final[size-2]).
  std::vector<double> d_mean_work;
  std::vector<double> d_delta_f;
  std::vector<double> d_irreversible_work;
};

inline ThermoSweep thermo_sweep(int n, double gamma, double h_initial, std::span<const double> h_final_grid,
                                int threads = 1) {
  const double step = uniform_step(h_final_grid);
  const ModelParams initial_params{n, h_initial, gamma};
  initial_params.validate();
  for (double h : h_final_grid) ModelParams{n, h, gamma}.validate();
  const auto initial = ground_state(initial_params);

  ThermoSweep out;
  out.n = n;
  out.gamma = gamma;
  out.h_initial = h_initial;
  out.h_final.assign(h_final_grid.begin(), h_final_grid.end());
  out.stats.resize(h_final_grid.size());
  parallel_for(h_final_grid.size(), threads, [&](std::size_t i) {
    const QuenchSpec q{n, gamma, h_initial, h_final_grid[i]};
    const auto post = diagonalize(build_hamiltonian(q.final_params()));
    out.stats[i] = work_stats(overlap_distribution(initial, post, q));
  });

  std::vector<double> w, f, irr;
  for (const auto& s : out.stats) {
    w.push_back(s.mean_work);
    f.push_back(s.delta_f);
    irr.push_back(s.irreversible_work);
  }
  out.d_mean_work = central_first_difference(w, step);
  out.d_delta_f = central_first_difference(f, step);
  out.d_irreversible_work = central_first_difference(irr, step);
  return out;
}

}  // namespace lmg
