#pragma once

// Dense reference construction of the LMG Hamiltonian from explicit collective
// spin matrices. O(N^3); used to validate the closed-form pentadiagonal build.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "lmg/error.hpp"
#include "lmg/model.hpp"

namespace lmg {

struct SpinMatrices {
  Eigen::MatrixXcd sz, splus, sminus, sx, sy;
};

inline SpinMatrices collective_spin_matrices(int n) {
  const CollectiveBasis basis(n);
  const int d = basis.dimension();
  const double j = basis.j();
  SpinMatrices s;
  s.sz = Eigen::MatrixXcd::Zero(d, d);
  s.splus = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = basis.m(i);
    s.sz(i, i) = m;
    if (i + 1 < d) s.splus(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  s.sminus = s.splus.adjoint();
  const std::complex<double> two_i(0.0, 2.0);
  s.sx = (s.splus + s.sminus) / 2.0;
  s.sy = (s.splus - s.sminus) / two_i;
  return s;
}

namespace detail {

// No gamma range check, so the isotropic point gamma = 1 can be probed.
inline Eigen::MatrixXd dense_operator_matrix(int n, double h, double gamma) {
  const auto s = collective_spin_matrices(n);
  const Eigen::MatrixXcd hc = -(2.0 / n) * (s.sx * s.sx + gamma * (s.sy * s.sy)) - 2.0 * h * s.sz;
  const double residue = hc.imag().cwiseAbs().maxCoeff();
  if (residue > 1e-13) {
    throw NumericalError("operator-product Hamiltonian has imaginary residue " + std::to_string(residue));
  }
  const Eigen::MatrixXd real = hc.real();
  const double asym = (real - real.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-13) throw NumericalError("operator-product Hamiltonian is not symmetric");
  return real;
}

}  // namespace detail

inline Eigen::MatrixXd dense_operator_hamiltonian(const ModelParams& params) {
  params.validate();
  return detail::dense_operator_matrix(params.n, params.h, params.gamma);
}

}  // namespace lmg
