#pragma once

// Independent reference computations used only by the test suites. None of
// these go through the spectral shortcuts they are meant to check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "lmg/model.hpp"
#include "lmg/quench.hpp"

namespace lmg::oracle {

// exp(-i H t) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXcd propagator(const Eigen::MatrixXd& h, double t) {
  const std::complex<double> minus_i(0.0, -1.0);
  const Eigen::MatrixXcd a = minus_i * t * h.cast<std::complex<double>>();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);

  const auto d = h.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// L(t) from direct propagation of the initial ground state under H_f.
inline double propagated_fidelity(const QuenchSpec& q, double t) {
  const auto initial = ground_state(q.initial());
  const Eigen::MatrixXd hf = build_hamiltonian(q.final_params()).dense();
  const Eigen::VectorXcd psi0 = initial.vector.cast<std::complex<double>>();
  const Eigen::VectorXcd psit = propagator(hf, t) * psi0;
  return std::norm(psi0.dot(psit));
}

// 2 Re int_0^T e^{i w t} e^{-eta t} O(t) dt on a uniform grid, trapezoid rule
// with one Richardson step (steps dt and dt/2). O(t) is summed from the
// overlap distribution at every quadrature node.
class DampedIntegral {
 public:
  DampedIntegral(const OverlapDistribution& d, double eta, double t_end, double dt) : eta_(eta) {
    steps_ = static_cast<std::size_t>(std::ceil(t_end / dt));
    if (steps_ % 2 == 1) ++steps_;
    dt_ = t_end / static_cast<double>(steps_);
    samples_.resize(steps_ + 1);
    for (std::size_t k = 0; k <= steps_; ++k) {
      const double t = dt_ * static_cast<double>(k);
      samples_[k] = std::exp(-eta * t) * overlap_amplitude(d, t);
    }
  }

  double operator()(double omega) const {
    std::complex<double> fine{0.0, 0.0};
    std::complex<double> coarse{0.0, 0.0};
    const std::complex<double> turn = std::polar(1.0, omega * dt_);
    std::complex<double> phase{1.0, 0.0};
    for (std::size_t k = 0; k <= steps_; ++k) {
      // phasor recurrence, resynchronised to keep rounding drift negligible
      if (k % 512 == 0) phase = std::polar(1.0, omega * dt_ * static_cast<double>(k));
      const std::complex<double> f = phase * samples_[k];
      phase *= turn;
      const double w_fine = (k == 0 || k == steps_) ? 0.5 : 1.0;
      fine += w_fine * f;
      if (k % 2 == 0) {
        const double w_coarse = (k == 0 || k == steps_) ? 0.5 : 1.0;
        coarse += w_coarse * f;
      }
    }
    const std::complex<double> t_fine = fine * dt_;
    const std::complex<double> t_coarse = coarse * (2.0 * dt_);
    return 2.0 * ((4.0 * t_fine - t_coarse) / 3.0).real();
  }

  double step() const { return dt_; }
  double eta() const { return eta_; }

 private:
  double eta_;
  double dt_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<std::complex<double>> samples_;
};

// Replaces the eigenvectors of every degenerate group by a random orthonormal
// combination of themselves.
inline EigenDecomposition rotate_degenerate_groups(EigenDecomposition e, std::uint64_t seed,
                                                   double tolerance = kDegeneracyTolerance) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (const auto& [begin, end] : e.degenerate_groups(tolerance)) {
    const int size = end - begin;
    if (size < 2) continue;
    Eigen::MatrixXd g(size, size);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) g(r, c) = normal(rng);
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const Eigen::MatrixXd block = e.vectors.middleCols(begin, size) * q;
    e.vectors.middleCols(begin, size) = block;
  }
  return e;
}

}  // namespace lmg::oracle
