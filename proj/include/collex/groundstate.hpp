// groundstate.hpp — Gaussian ground-state statistics of the harmonic part.
//
// The harmonic potential separates into symmetric / antisymmetric chain
// combinations s = (x1+x2)/sqrt(2), d = (x1-x2)/sqrt(2):
//   V = s^T (W+M-K) s + d^T (W+M+K) d,  M_ii = sum_l K_il.
// All ground-state variances follow from the sector covariances
//   P = (hbar / (2 sqrt(2m))) (W+M-K)^{-1/2}   (zero mode projected)
//   D = (hbar / (2 sqrt(2m))) (W+M+K)^{-1/2}.

#pragma once

#include "collex/linalg.hpp"
#include "collex/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace collex {

struct SectorMatrices {
  Matrix v_s;     // W + M - K (symmetric sector, has the COM zero mode)
  Matrix v_d;     // W + M + K (antisymmetric sector, positive definite)
  Vector m_diag;  // row sums of K
};

enum class AlphaMethod { paper, exact };
enum class CRegime { full, semiclassical };

inline SectorMatrices sector_matrices(const ChainModel& model) {
  const Matrix& w = model.intra_coupling;
  const Matrix& k = model.inter_coupling;
  SectorMatrices s;
  s.m_diag = coupling_row_sums(k);
  const Matrix m = s.m_diag.asDiagonal();
  s.v_s = symmetrized(Matrix(w + m - k));
  s.v_d = symmetrized(Matrix(w + m + k));
  return s;
}

// Gamma = (hbar/sqrt(2m)) ( (W+M-K)^{-1/2} + (W+M+K)^{-1/2} ), the COM zero
// mode of the symmetric sector projected out.
inline Matrix gamma_matrix(const SectorMatrices& sectors, double mass,
                           double hbar) {
  const double pref = hbar / std::sqrt(2.0 * mass);
  return pref * (pseudo_inverse_sqrt(sectors.v_s, "symmetric sector") +
                 symmetric_inverse_sqrt(sectors.v_d, "antisymmetric sector"));
}

// Ground-state covariance of one sector in site coordinates.
inline Matrix sector_covariance(const Matrix& v, double mass, double hbar,
                                bool project_zero_mode,
                                const std::string& what) {
  const double pref = 0.5 * hbar / std::sqrt(2.0 * mass);
  return pref * (project_zero_mode ? pseudo_inverse_sqrt(v, what)
                                   : symmetric_inverse_sqrt(v, what));
}

// alpha_ij = <(x_i^(1) - x_j^(2))^2> in the H0 ground state.
inline Matrix alpha_matrix(const ChainModel& model, const SectorMatrices& sectors,
                           AlphaMethod method) {
  const int n = model.n_particles;
  if (method == AlphaMethod::paper) {
    const Vector g = gamma_matrix(sectors, model.mass, model.hbar).diagonal();
    Matrix alpha(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) alpha(i, j) = (g[i] + g[j]) / 4.0;
    return alpha;
  }
  const Matrix p = sector_covariance(sectors.v_s, model.mass, model.hbar, true,
                                     "symmetric sector");
  const Matrix d = sector_covariance(sectors.v_d, model.mass, model.hbar, false,
                                     "antisymmetric sector");
  Matrix alpha(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      alpha(i, j) = 0.5 * (p(i, i) + p(j, j) - 2.0 * p(i, j) + d(i, i) +
                           d(j, j) + 2.0 * d(i, j));
  return symmetrized(alpha);
}

// E[z^{2n}] = alpha^n (2n-1)!! for z ~ N(0, alpha).
inline double gaussian_even_moment(double alpha, int n) {
  double acc = 1.0;
  for (int k = 1; k <= n; ++k) acc *= (2 * k - 1) * alpha;
  return acc;
}

// E[f''(z)] for z ~ N(0, alpha); term 2n(2n-1) f_n z^{2n-2}.
inline double expected_f_second_derivative(const ChainModel& model,
                                           double alpha) {
  if (alpha < 0)
    throw std::domain_error("expected_f_second_derivative: negative variance");
  double acc = 0.0;
  int two_n = 4;
  for (double fn : model.anharmonic_coeffs) {
    acc += fn * two_n * (two_n - 1) * gaussian_even_moment(alpha, two_n / 2 - 1);
    two_n += 2;
  }
  return acc;
}

inline double expected_f(const ChainModel& model, double alpha) {
  if (alpha < 0) throw std::domain_error("expected_f: negative variance");
  double acc = 0.0;
  int two_n = 4;
  for (double fn : model.anharmonic_coeffs) {
    acc += fn * gaussian_even_moment(alpha, two_n / 2);
    two_n += 2;
  }
  return acc;
}

// C_ij = <0| f''(x_i^(1) - x_j^(2)) |0>, evaluated by Gaussian moments.
// In the semiclassical regime only the quartic term survives: C = 12 f2 alpha.
inline Matrix c_matrix(const ChainModel& model, const Matrix& alpha,
                       CRegime regime) {
  const int n = model.n_particles;
  Matrix c(n, n);
  const double f2 =
      model.anharmonic_coeffs.empty() ? 0.0 : model.anharmonic_coeffs.front();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c(i, j) = regime == CRegime::semiclassical
                    ? 12.0 * f2 * alpha(i, j)
                    : expected_f_second_derivative(model, alpha(i, j));
  return symmetrized(c);
}

// <0| H1 |0> = sum_ij E[f(x_i^(1) - x_j^(2))].
inline double h1_expectation(const ChainModel& model, const Matrix& alpha) {
  double acc = 0.0;
  for (int i = 0; i < model.n_particles; ++i)
    for (int j = 0; j < model.n_particles; ++j)
      acc += expected_f(model, alpha(i, j));
  return acc;
}

struct GroundStateStats {
  Vector gamma_diag;
  Matrix alpha;
  Matrix c;
  double h1 = 0.0;
  AlphaMethod alpha_method = AlphaMethod::exact;
};

inline GroundStateStats ground_state_stats(const ChainModel& model,
                                           AlphaMethod method = AlphaMethod::exact,
                                           CRegime regime = CRegime::full) {
  const SectorMatrices sectors = sector_matrices(model);
  GroundStateStats stats;
  stats.alpha_method = method;
  stats.gamma_diag = gamma_matrix(sectors, model.mass, model.hbar).diagonal();
  stats.alpha = alpha_matrix(model, sectors, method);
  stats.c = c_matrix(model, stats.alpha, regime);
  stats.h1 = h1_expectation(model, stats.alpha);
  return stats;
}

// Smallest nonzero classical frequency sqrt(2 v / m) over both sectors.
inline double minimal_frequency(const ChainModel& model) {
  const SectorMatrices sectors = sector_matrices(model);
  double vmin = std::numeric_limits<double>::infinity();
  for (const Matrix* v : {&sectors.v_s, &sectors.v_d}) {
    auto es = eigh(*v);
    const double tol = kZeroModeRelTol * es.eigenvalues().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > tol) vmin = std::min(vmin, es.eigenvalues()[i]);
  }
  return std::sqrt(2.0 * vmin / model.mass);
}

// Perturbative validity: lambda |<H1>| / (hbar omega_min) must stay small.
inline ValidationReport validity_report(const ChainModel& model,
                                        const GroundStateStats& stats,
                                        double threshold = 0.1) {
  ValidationReport report;
  const double omega_min = minimal_frequency(model);
  const double ratio =
      model.lambda * std::abs(stats.h1) / (model.hbar * omega_min);
  report.checks.push_back(
      {"perturbative_ratio", ratio <= threshold, threshold - ratio});
  report.overall = report.checks.front().passed;
  return report;
}

}  // namespace collex
