// renormalize.hpp — effective harmonic Hamiltonian absorbing the
// anharmonicity to first order, and its collective-mode decomposition.
//
// K^R = K + (lambda/2) C renormalizes the inter-chain couplings. The DCT
// with uniform first column maps the antisymmetric sector to (collective
// coordinate X, internal "bath" modes); deleting X's row/column of
// Ktilde^R = A^T (W + M^R + K^R) A yields the bath block K_r and the
// coupling vector k.

#pragma once

#include "collex/groundstate.hpp"
#include "collex/linalg.hpp"
#include "collex/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>

namespace collex {

struct RenormalizedSystem {
  Matrix k_renorm;       // K^R, N x N
  Vector m_renorm_diag;  // row sums of K^R
  Matrix ktilde;         // A^T (W + M^R + K^R) A
  Matrix k_r;            // ktilde without first row/column
  Vector k_vec;          // first column of ktilde, first element dropped
  double omega0_renorm = 0.0;
  Matrix full_potential;  // 2N x 2N quadratic form of H0^R in site coordinates
  double mass = 1.0;
  double hbar = 1.0;
};

inline std::pair<Matrix, Vector> renormalized_couplings(const ChainModel& model,
                                                        const Matrix& c) {
  Matrix kr = model.inter_coupling + 0.5 * model.lambda * c;
  Vector mr = coupling_row_sums(kr);
  return {std::move(kr), std::move(mr)};
}

// Orthonormal DCT-II matrix; the first column is the uniform vector, so the
// first transformed coordinate of the antisymmetric sector is X.
inline Matrix dct_matrix(int n) {
  Matrix a(n, n);
  const double pi = std::numbers::pi;
  for (int j = 0; j < n; ++j) {
    a(j, 0) = 1.0 / std::sqrt(double(n));
    for (int k = 1; k < n; ++k)
      a(j, k) = std::sqrt(2.0 / n) * std::cos(pi * k * (2 * j + 1) / (2.0 * n));
  }
  return a;
}

// Coefficient vector of X over the 2N site coordinates, unit norm.
inline Vector collective_direction(int n) {
  Vector u(2 * n);
  const double c = 1.0 / std::sqrt(2.0 * n);
  u.head(n).setConstant(c);
  u.tail(n).setConstant(-c);
  return u;
}

// 2N x 2N potential [[W + M', -K'], [-K', W + M']] for coupling K'.
inline Matrix two_chain_potential(const Matrix& w, const Matrix& k) {
  const int n = int(w.rows());
  const Matrix m = coupling_row_sums(k).asDiagonal();
  Matrix v(2 * n, 2 * n);
  v.topLeftCorner(n, n) = w + m;
  v.bottomRightCorner(n, n) = w + m;
  v.topRightCorner(n, n) = -k;
  v.bottomLeftCorner(n, n) = -k;
  return symmetrized(v);
}

inline RenormalizedSystem collective_transform(const ChainModel& model,
                                               const Matrix& k_renorm,
                                               const Vector& m_renorm_diag) {
  const int n = model.n_particles;
  RenormalizedSystem sys;
  sys.mass = model.mass;
  sys.hbar = model.hbar;
  sys.k_renorm = k_renorm;
  sys.m_renorm_diag = m_renorm_diag;

  const Matrix a = dct_matrix(n);
  const Matrix mr = m_renorm_diag.asDiagonal();
  const Matrix b = a.transpose() * (model.intra_coupling + mr + k_renorm) * a;
  const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff()))
    throw std::runtime_error("collective_transform: transformed matrix asymmetric");
  sys.ktilde = symmetrized(b);
  sys.k_r = sys.ktilde.bottomRightCorner(n - 1, n - 1);
  sys.k_vec = sys.ktilde.col(0).tail(n - 1);
  sys.full_potential = two_chain_potential(model.intra_coupling, k_renorm);

  // Schur complement: the memory-free oscillator frequency of X,
  // Omega0^2 = (2/m) (ktilde_11 - k^T K_r^{-1} k) = 2 ktilde_11/m - gamma(0).
  double schur = sys.ktilde(0, 0);
  if (n > 1) schur -= sys.k_vec.dot(sys.k_r.ldlt().solve(sys.k_vec));
  if (schur <= 0)
    throw InstabilityError("collective_transform: collective mode unstable");
  sys.omega0_renorm = std::sqrt(2.0 * schur / model.mass);
  return sys;
}

// Omega0^R from the collective stiffness and the kernel at t = 0.
inline double renormalized_frequency(const RenormalizedSystem& sys, double mass,
                                     double gamma_at_zero) {
  const double rad = 2.0 * sys.ktilde(0, 0) / mass - gamma_at_zero;
  if (rad < 0)
    throw InstabilityError("renormalized_frequency: negative squared frequency");
  return std::sqrt(rad);
}

inline RenormalizedSystem renormalize(const ChainModel& model,
                                      const GroundStateStats& stats) {
  auto [kr, mr] = renormalized_couplings(model, stats.c);
  return collective_transform(model, kr, mr);
}

}  // namespace collex
