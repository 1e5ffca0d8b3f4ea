// linalg.hpp — symmetric matrix functions shared by all modules.
//
// Everything here is a thin wrapper around Eigen's self-adjoint
// eigensolver. Matrices are assumed symmetric on entry; the caller is
// responsible for symmetrizing round-off before calling.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace collex {

// Eigenvalues with |e| <= kZeroModeRelTol * max|e| count as zero modes.
inline constexpr double kZeroModeRelTol = 1e-10;

struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eigh(
    const DenseMatrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  return es;
}

// V^{-1/2} for symmetric positive definite V. Throws InstabilityError on a
// negative (beyond tolerance) or zero eigenvalue; `what` names the matrix in
// the error message.
template <typename Scalar>
DenseMatrix<Scalar> symmetric_inverse_sqrt(const DenseMatrix<Scalar>& v,
                                           const std::string& what = "matrix") {
  auto es = eigh(v);
  const auto& evals = es.eigenvalues();
  const Scalar scale = evals.cwiseAbs().maxCoeff();
  const Scalar tol = kZeroModeRelTol * scale;
  DenseVector<Scalar> d(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals[i] <= tol)
      throw InstabilityError(what + ": non-positive eigenvalue " +
                             std::to_string(evals[i]) + " in inverse sqrt");
    d[i] = Scalar(1) / std::sqrt(evals[i]);
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Pseudo-inverse square root: eigenvalues within the zero-mode tolerance are
// projected out, negative eigenvalues beyond it raise InstabilityError.
template <typename Scalar>
DenseMatrix<Scalar> pseudo_inverse_sqrt(const DenseMatrix<Scalar>& v,
                                        const std::string& what = "matrix") {
  auto es = eigh(v);
  const auto& evals = es.eigenvalues();
  const Scalar scale = evals.cwiseAbs().maxCoeff();
  const Scalar tol = kZeroModeRelTol * scale;
  DenseVector<Scalar> d(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals[i] < -tol)
      throw InstabilityError(what + ": negative eigenvalue " +
                             std::to_string(evals[i]) + " in pseudo-inverse sqrt");
    d[i] = evals[i] <= tol ? Scalar(0) : Scalar(1) / std::sqrt(evals[i]);
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Number of eigenvalues within the zero-mode tolerance.
template <typename Scalar>
int zero_mode_count(const DenseMatrix<Scalar>& v) {
  auto es = eigh(v);
  const auto& evals = es.eigenvalues();
  const Scalar tol = kZeroModeRelTol * evals.cwiseAbs().maxCoeff();
  int n = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (std::abs(evals[i]) <= tol) ++n;
  return n;
}

template <typename Scalar>
DenseMatrix<Scalar> symmetrized(const DenseMatrix<Scalar>& a) {
  return (a + a.transpose()) / Scalar(2);
}

}  // namespace collex
