// model.hpp — two coupled particle chains with an even polynomial
// inter-chain anharmonicity.
//
// The harmonic part is
//   H0 = sum_a [ p^(a)^2/2m + x^(a)^T W x^(a) ] + sum_ij K_ij (x_i^(1)-x_j^(2))^2
// (note: no 1/2 in front of the potentials) and the perturbation is
//   H1 = sum_ij f(x_i^(1)-x_j^(2)),  f(z) = sum_{n>=2} f_n z^{2n}.

#pragma once

#include "collex/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace collex {

struct InvalidParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ChainModel {
  int n_particles = 0;      // N, particles per chain
  double mass = 1.0;        // m
  double hbar = 1.0;        // hbar
  double lambda = 0.0;      // perturbation strength
  Matrix intra_coupling;    // W, N x N symmetric, W.1 = 0
  Matrix inter_coupling;    // K, N x N symmetric, entrywise >= 0
  // f_n for n = 2, 3, ... (anharmonic_coeffs[k] multiplies z^{2(k+2)})
  std::vector<double> anharmonic_coeffs;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // signed distance to the failure boundary
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool overall = false;
};

enum class ChainKind { open_chain, ring };
enum class CouplingShape { uniform, diagonal };

// Nearest-neighbor Laplacian of the chain, scaled by w.
inline Matrix chain_laplacian(ChainKind kind, int n, double w) {
  Matrix lap = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    lap(i, i) += w;
    lap(i + 1, i + 1) += w;
    lap(i, i + 1) -= w;
    lap(i + 1, i) -= w;
  }
  if (kind == ChainKind::ring && n > 2) {
    lap(0, 0) += w;
    lap(n - 1, n - 1) += w;
    lap(0, n - 1) -= w;
    lap(n - 1, 0) -= w;
  }
  return lap;
}

inline ChainModel build_standard_model(ChainKind kind, int n, double w,
                                       double kappa, CouplingShape k_shape,
                                       double mass = 1.0, double hbar = 1.0,
                                       double lambda = 0.0,
                                       std::vector<double> coeffs = {}) {
  if (n < 1) throw InvalidParameterError("build_standard_model: N must be >= 1");
  if (w <= 0) throw InvalidParameterError("build_standard_model: w must be > 0");
  if (kappa <= 0)
    throw InvalidParameterError("build_standard_model: kappa must be > 0");
  if (mass <= 0 || hbar <= 0)
    throw InvalidParameterError("build_standard_model: mass and hbar must be > 0");
  if (lambda < 0)
    throw InvalidParameterError("build_standard_model: lambda must be >= 0");

  ChainModel model;
  model.n_particles = n;
  model.mass = mass;
  model.hbar = hbar;
  model.lambda = lambda;
  model.intra_coupling = chain_laplacian(kind, n, w);
  model.inter_coupling = k_shape == CouplingShape::uniform
                             ? Matrix::Constant(n, n, kappa / n)
                             : Matrix(kappa * Matrix::Identity(n, n));
  model.anharmonic_coeffs = std::move(coeffs);
  return model;
}

// f(z) = sum_n f_n z^{2n}, n starting at 2.
inline double eval_f(const ChainModel& model, double z) {
  const double z2 = z * z;
  double acc = 0.0, pw = z2 * z2;  // z^4
  for (double fn : model.anharmonic_coeffs) {
    acc += fn * pw;
    pw *= z2;
  }
  return acc;
}

inline double eval_f_second_derivative(const ChainModel& model, double z) {
  const double z2 = z * z;
  double acc = 0.0, pw = z2;  // z^2, second derivative of z^4 term
  int two_n = 4;
  for (double fn : model.anharmonic_coeffs) {
    acc += fn * two_n * (two_n - 1) * pw;
    pw *= z2;
    two_n += 2;
  }
  return acc;
}

// Row-sum diagonal M of the inter-chain coupling, M_ii = sum_l K_il.
inline Vector coupling_row_sums(const Matrix& k) { return k.rowwise().sum(); }

inline ValidationReport validate(const ChainModel& model) {
  ValidationReport report;
  auto add = [&](const std::string& name, bool pass, double margin) {
    report.checks.push_back({name, pass, margin});
  };

  const int n = model.n_particles;
  const Matrix& w = model.intra_coupling;
  const Matrix& k = model.inter_coupling;

  {
    double r = (w - w.transpose()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    add("w_symmetric", r <= 1e-12 * scale, 1e-12 * scale - r);
  }
  {
    double r = (k - k.transpose()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    add("k_symmetric", r <= 1e-12 * scale, 1e-12 * scale - r);
  }
  {
    double r = (w * Vector::Ones(n)).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    add("translation_invariance", r <= 1e-10 * scale, 1e-10 * scale - r);
  }
  {
    double kmin = k.minCoeff();
    add("k_entries_nonnegative", kmin >= 0.0, kmin);
  }

  const Matrix m = coupling_row_sums(k).asDiagonal();
  const Matrix v_s = symmetrized(Matrix(w + m - k));
  const Matrix v_d = symmetrized(Matrix(w + m + k));

  {
    auto es = eigh(w);
    double tol = kZeroModeRelTol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double emin = es.eigenvalues().minCoeff();
    bool psd = emin >= -tol;
    int zeros = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(es.eigenvalues()[i]) <= tol) ++zeros;
    add("w_positive_semidefinite", psd, emin + tol);
    // single particle per chain has no intra-chain bond; W = 0 is fine
    add("w_single_zero_mode", n == 1 ? zeros == 1 : psd && zeros == 1,
        1.0 - std::abs(zeros - 1));
  }
  {
    double emin = eigh(v_d).eigenvalues().minCoeff();
    add("w_m_plus_k_positive_definite", emin > 0.0, emin);
  }
  {
    auto es = eigh(v_s);
    double tol = kZeroModeRelTol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double emin = es.eigenvalues().minCoeff();
    bool psd = emin >= -tol;
    int zeros = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(es.eigenvalues()[i]) <= tol) ++zeros;
    add("w_m_minus_k_psd_single_zero_mode", psd && zeros == 1, emin + tol);
  }
  {
    bool ok = true;
    double fmin = 0.0;
    for (double fn : model.anharmonic_coeffs) {
      fmin = std::min(fmin, fn);
      if (fn < 0.0) ok = false;
    }
    add("anharmonic_coeffs_nonnegative", ok, fmin);
    if (model.lambda > 0.0) {
      bool any = false;
      for (double fn : model.anharmonic_coeffs)
        if (fn > 0.0) any = true;
      add("anharmonicity_present", any, any ? 1.0 : -1.0);
    }
  }

  report.overall = true;
  for (const auto& c : report.checks)
    if (!c.passed) report.overall = false;
  return report;
}

}  // namespace collex
