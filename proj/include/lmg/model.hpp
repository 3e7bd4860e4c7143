#pragma once

// Lipkin-Meshkov-Glick Hamiltonian in the maximal collective-spin sector
//
//   H = -(2/N) (Sx^2 + gamma Sy^2) - 2 h Sz,
//
// represented in the Sz eigenbasis |j = N/2, m>, m = -j..j. Only m -> m +- 2
// couplings appear, so H is pentadiagonal and splits into two tridiagonal
// blocks: even basis indices and odd basis indices (the parity sectors).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

// Eigenvalues closer than this are treated as one degenerate group.
inline constexpr double kDegeneracyTolerance = 1e-10;

struct ModelParams {
  int n = 2;
  double h = 0.0;
  double gamma = 0.0;

  void validate() const {
    require(n >= 2, "N must be an integer >= 2 (got " + std::to_string(n) + ")");
    require(std::isfinite(h), "h must be finite");
    require(std::isfinite(gamma) && gamma >= 0.0 && gamma < 1.0,
            "gamma must satisfy 0 <= gamma < 1 (got " + std::to_string(gamma) + ")");
  }
};

class CollectiveBasis {
 public:
  explicit CollectiveBasis(int n) : n_(n) {
    require(n >= 2, "N must be an integer >= 2 (got " + std::to_string(n) + ")");
  }

  int n() const { return n_; }
  double j() const { return 0.5 * n_; }
  int dimension() const { return n_ + 1; }

  // m = -j + i, exact for half-integers.
  double m(int index) const { return 0.5 * (2 * index - n_); }

  // (-1)^index; the grading preserved by the Hamiltonian.
  static int parity(int index) { return (index % 2 == 0) ? +1 : -1; }

 private:
  int n_;
};

inline CollectiveBasis build_basis(int n) { return CollectiveBasis(n); }

// Real symmetric pentadiagonal matrix with only the main and +-2 diagonals.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(ModelParams params, Eigen::VectorXd diagonal, Eigen::VectorXd second_off)
      : params_(params), diag_(std::move(diagonal)), off2_(std::move(second_off)) {}

  const ModelParams& params() const { return params_; }
  int dimension() const { return static_cast<int>(diag_.size()); }

  // diagonal()(i) = H[i][i]; second_off_diagonal()(i) = H[i+2][i] = H[i][i+2].
  const Eigen::VectorXd& diagonal() const { return diag_; }
  const Eigen::VectorXd& second_off_diagonal() const { return off2_; }

  double operator()(int a, int b) const {
    if (a == b) return diag_(a);
    if (a - b == 2) return off2_(b);
    if (b - a == 2) return off2_(a);
    return 0.0;
  }

  Eigen::MatrixXd dense() const {
    const int d = dimension();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) out(i, i) = diag_(i);
    for (int i = 0; i + 2 < d; ++i) {
      out(i + 2, i) = off2_(i);
      out(i, i + 2) = off2_(i);
    }
    return out;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    const int d = dimension();
    Eigen::VectorXd out = diag_.cwiseProduct(v);
    for (int i = 0; i + 2 < d; ++i) {
      out(i + 2) += off2_(i) * v(i);
      out(i) += off2_(i) * v(i + 2);
    }
    return out;
  }

  double trace() const { return diag_.sum(); }

  // Copy with `shift` added to every diagonal entry.
  HamiltonianMatrix shifted(double shift) const {
    return HamiltonianMatrix(params_, (diag_.array() + shift).matrix(), off2_);
  }

 private:
  ModelParams params_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd off2_;
};

// Closed-form matrix elements from the ladder-operator algebra:
//   H[m][m]     = -(1+gamma) (j(j+1) - m^2) / N - 2 h m
//   H[m+2][m]   = -(1-gamma)/(2N) sqrt[(j-m)(j+m+1) (j-m-1)(j+m+2)]
inline HamiltonianMatrix build_hamiltonian(const ModelParams& params) {
  params.validate();
  const CollectiveBasis basis(params.n);
  const int d = basis.dimension();
  const double j = basis.j();
  const double n = params.n;
  const double jj = j * (j + 1.0);

  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) {
    const double m = basis.m(i);
    diag(i) = -(1.0 + params.gamma) * (jj - m * m) / n - 2.0 * params.h * m;
  }
  Eigen::VectorXd off2(std::max(d - 2, 0));
  for (int i = 0; i + 2 < d; ++i) {
    const double m = basis.m(i);
    const double first = (j - m) * (j + m + 1.0);
    const double second = (j - m - 1.0) * (j + m + 2.0);
    off2(i) = -(1.0 - params.gamma) / (2.0 * n) * std::sqrt(first * second);
  }
  return HamiltonianMatrix(params, std::move(diag), std::move(off2));
}

struct EigenDecomposition {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // column k belongs to energies(k)
  std::vector<int> parity;   // +1 (even basis indices) or -1 (odd)

  int size() const { return static_cast<int>(energies.size()); }

  // Half-open index ranges [begin, end) of consecutive eigenvalues whose
  // neighbours differ by at most `tolerance`.
  std::vector<std::pair<int, int>> degenerate_groups(double tolerance = kDegeneracyTolerance) const {
    std::vector<std::pair<int, int>> groups;
    int begin = 0;
    for (int k = 1; k <= size(); ++k) {
      if (k == size() || energies(k) - energies(k - 1) > tolerance) {
        groups.emplace_back(begin, k);
        begin = k;
      }
    }
    return groups;
  }
};

namespace detail {

// Basis indices belonging to a parity sector (0 = even, 1 = odd).
inline std::vector<int> sector_indices(int dimension, int sector) {
  std::vector<int> idx;
  for (int i = sector; i < dimension; i += 2) idx.push_back(i);
  return idx;
}

struct SectorSolution {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // in sector coordinates; empty when not requested
};

inline SectorSolution solve_sector(const HamiltonianMatrix& h, int sector, bool with_vectors) {
  const auto idx = sector_indices(h.dimension(), sector);
  const auto size = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd d(size);
  Eigen::VectorXd e(std::max<Eigen::Index>(size - 1, 0));
  for (Eigen::Index k = 0; k < size; ++k) d(k) = h.diagonal()(idx[k]);
  for (Eigen::Index k = 0; k + 1 < size; ++k) e(k) = h.second_off_diagonal()(idx[k]);

  SectorSolution out;
  if (size == 1) {
    out.energies = d;
    if (with_vectors) out.vectors = Eigen::MatrixXd::Ones(1, 1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("tridiagonal eigensolver did not converge (N=" + std::to_string(h.params().n) +
                         ", h=" + std::to_string(h.params().h) + ")");
  }
  out.energies = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

// Largest-magnitude component positive; ties go to the lowest index.
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
}

inline int sector_parity(int sector) { return sector == 0 ? +1 : -1; }

// Sector holding the fully polarised state favoured by the field: m = +j
// (index N) for h >= 0, m = -j (index 0) otherwise.
inline int field_favoured_sector(const ModelParams& p) { return p.h >= 0.0 ? (p.n % 2) : 0; }

}  // namespace detail

// Full spectrum, assembled from the two tridiagonal parity blocks. Every
// eigenvector is supported on exactly one sector (other components are 0).
inline EigenDecomposition diagonalize(const HamiltonianMatrix& h) {
  const int d = h.dimension();
  std::array<detail::SectorSolution, 2> sectors{detail::solve_sector(h, 0, true),
                                                detail::solve_sector(h, 1, true)};

  // (energy, sector, index within sector) ordered lexicographically.
  std::vector<std::tuple<double, int, int>> order;
  order.reserve(static_cast<std::size_t>(d));
  for (int s = 0; s < 2; ++s) {
    for (Eigen::Index k = 0; k < sectors[s].energies.size(); ++k) {
      order.emplace_back(sectors[s].energies(k), s, static_cast<int>(k));
    }
  }
  std::sort(order.begin(), order.end());

  EigenDecomposition out;
  out.energies.resize(d);
  out.vectors = Eigen::MatrixXd::Zero(d, d);
  out.parity.resize(static_cast<std::size_t>(d));
  for (int col = 0; col < d; ++col) {
    const auto [energy, s, k] = order[static_cast<std::size_t>(col)];
    const auto idx = detail::sector_indices(d, s);
    out.energies(col) = energy;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.vectors(idx[r], col) = sectors[s].vectors(static_cast<Eigen::Index>(r), k);
    }
    detail::fix_sign(out.vectors.col(col));
    out.parity[static_cast<std::size_t>(col)] = detail::sector_parity(s);
  }
  return out;
}

// Ascending eigenvalues only.
inline Eigen::VectorXd spectrum(const HamiltonianMatrix& h) {
  const auto even = detail::solve_sector(h, 0, false);
  const auto odd = detail::solve_sector(h, 1, false);
  Eigen::VectorXd out(h.dimension());
  out << even.energies, odd.energies;
  std::sort(out.data(), out.data() + out.size());
  return out;
}

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;
  int parity = +1;
};

namespace detail {

// Chooses the ground sector: the strictly lower one, or the field-favoured one
// when the two sector minima are degenerate to within kDegeneracyTolerance.
inline int ground_sector(const ModelParams& p, double even_min, double odd_min) {
  if (std::abs(even_min - odd_min) <= kDegeneracyTolerance) return field_favoured_sector(p);
  return even_min < odd_min ? 0 : 1;
}

}  // namespace detail

// Lowest eigenpair. When the two parity sectors are degenerate at the bottom of
// the spectrum (h < 1, large N) the state of the sector containing the
// field-polarised configuration is returned, so the result is deterministic.
inline GroundState ground_state(const HamiltonianMatrix& h) {
  const int d = h.dimension();
  const auto even = detail::solve_sector(h, 0, false);
  const auto odd = detail::solve_sector(h, 1, false);
  const int s = detail::ground_sector(h.params(), even.energies(0), odd.energies(0));
  const auto chosen = detail::solve_sector(h, s, true);
  const auto idx = detail::sector_indices(d, s);

  GroundState out;
  out.energy = chosen.energies(0);
  out.vector = Eigen::VectorXd::Zero(d);
  for (std::size_t r = 0; r < idx.size(); ++r) out.vector(idx[r]) = chosen.vectors(static_cast<Eigen::Index>(r), 0);
  detail::fix_sign(out.vector);
  out.parity = detail::sector_parity(s);
  return out;
}

inline GroundState ground_state(const ModelParams& params) { return ground_state(build_hamiltonian(params)); }

// Ground-state energy without eigenvectors.
inline double ground_energy(const HamiltonianMatrix& h) {
  const auto even = detail::solve_sector(h, 0, false);
  const auto odd = detail::solve_sector(h, 1, false);
  return std::min(even.energies(0), odd.energies(0));
}

}  // namespace lmg
