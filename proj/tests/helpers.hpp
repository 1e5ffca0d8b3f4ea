// Shared test utilities: seeded random stable models and a Gauss-Hermite
// quadrature oracle for Gaussian expectations.

#pragma once

#include "collex/groundstate.hpp"
#include "collex/linalg.hpp"
#include "collex/model.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace testutil {

using collex::Matrix;
using collex::Vector;

// Chain Laplacian with random positive bond strengths: translation invariant,
// PSD, single zero mode for a connected chain.
inline Matrix random_chain_laplacian(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> bond(0.5, 1.5);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double b = bond(rng);
    w(i, i) += b;
    w(i + 1, i + 1) += b;
    w(i, i + 1) -= b;
    w(i + 1, i) -= b;
  }
  return w;
}

// Symmetric inter-chain coupling with nonnegative entries and positive row
// sums; any such K keeps both sectors stable.
inline Matrix random_coupling(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.3);
  std::uniform_real_distribution<double> base(0.4, 1.2);
  const double kappa = base(rng);
  Matrix k = Matrix::Constant(n, n, kappa / n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double extra = u(rng) / n;
      k(i, j) += extra;
      k(j, i) = k(i, j);
    }
  return k;
}

inline collex::ChainModel random_stable_model(int n, double lambda,
                                              std::mt19937_64& rng) {
  collex::ChainModel model;
  model.n_particles = n;
  model.mass = 1.0;
  model.hbar = 1.0;
  model.lambda = lambda;
  model.intra_coupling = random_chain_laplacian(n, rng);
  model.inter_coupling = random_coupling(n, rng);
  model.anharmonic_coeffs = {1.0};
  return model;
}

// Physicists' Gauss-Hermite rule (weight e^{-x^2}) via the Jacobi matrix.
struct GaussHermite {
  Vector nodes, weights;
  explicit GaussHermite(int npoints) {
    Matrix jac = Matrix::Zero(npoints, npoints);
    for (int k = 1; k < npoints; ++k) {
      const double b = std::sqrt(k / 2.0);
      jac(k - 1, k) = b;
      jac(k, k - 1) = b;
    }
    auto es = collex::eigh(jac);
    nodes = es.eigenvalues();
    weights.resize(npoints);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int k = 0; k < npoints; ++k) {
      const double v0 = es.eigenvectors()(0, k);
      weights[k] = sqrt_pi * v0 * v0;
    }
  }

  // E[g(z)] for z ~ N(0, alpha)
  template <typename Fn>
  double gaussian_expectation(Fn&& g, double alpha) const {
    const double scale = std::sqrt(2.0 * alpha);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < nodes.size(); ++k)
      acc += weights[k] * g(scale * nodes[k]);
    return acc / std::sqrt(std::numbers::pi);
  }
};

// Ground-state covariance of the full 2N-coordinate quadratic form
// (mass-weighted normal modes, zero modes excluded).
inline Matrix brute_force_covariance(const Matrix& full_potential, double mass,
                                     double hbar) {
  auto es = collex::eigh(full_potential);
  const Vector& ev = es.eigenvalues();
  const double tol = collex::kZeroModeRelTol * ev.cwiseAbs().maxCoeff();
  Matrix cov = Matrix::Zero(full_potential.rows(), full_potential.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= tol) continue;
    const double om = std::sqrt(2.0 * ev[i] / mass);
    cov += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() *
           (hbar / (2.0 * mass * om));
  }
  return cov;
}

}  // namespace testutil
