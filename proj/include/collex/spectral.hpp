// spectral.hpp — bath mode decomposition, bath spectral density, spreading
// kernel and the collective spectral density.
//
// The bath block K_r is diagonalized once; everything downstream is a closed
// form over the discrete modes (omega_n, w_n). Weights carry the factor 2
// from the equation of motion coupling -2 k^T q, i.e. w_n = (2 k.v_n)^2,
// which makes the memory-kernel description reproduce the exact normal-mode
// spectrum identically:
//   gamma(t)   = (1/m^2) sum_n (w_n/omega_n^2) cos(omega_n t)
//   Omega0^2   = 2 ktilde_11/m - gamma(0)
//   S(omega)   = (hbar/pi m) Im 1/(Omega0^2 - z^2 - i z gamma~(z)),  z = omega + i eps.

#pragma once

#include "collex/linalg.hpp"
#include "collex/renormalize.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace collex {

struct BathModes {
  Vector frequencies;  // omega_n = sqrt(2 kappa_n / m), kappa_n eig of K_r
  Vector weights;      // w_n = (2 k . v_n)^2
  double mass = 1.0;
};

enum class SeriesKind { sigma, gamma_t, gamma_tilde_re, gamma_tilde_im, s_tilde };

struct SpectrumSeries {
  Vector grid;
  Vector values;
  SeriesKind kind = SeriesKind::s_tilde;
  double epsilon = 0.0;
};

inline BathModes bath_modes(const RenormalizedSystem& sys, double mass) {
  BathModes modes;
  modes.mass = mass;
  const int nb = int(sys.k_r.rows());
  modes.frequencies.resize(nb);
  modes.weights.resize(nb);
  if (nb == 0) return modes;
  auto es = eigh(sys.k_r);
  for (int i = 0; i < nb; ++i) {
    const double kappa = es.eigenvalues()[i];
    if (kappa <= 0)
      throw InstabilityError("bath_modes: non-positive bath eigenvalue");
    modes.frequencies[i] = std::sqrt(2.0 * kappa / mass);
    const double overlap = 2.0 * sys.k_vec.dot(es.eigenvectors().col(i));
    modes.weights[i] = overlap * overlap;
  }
  return modes;
}

// Lorentzian-broadened bath spectral density, sigma(omega) >= 0 for omega > 0.
inline double sigma_R(const BathModes& modes, double omega, double epsilon) {
  if (epsilon <= 0) throw InvalidParameterError("sigma_R: epsilon must be > 0");
  double acc = 0.0;
  for (int i = 0; i < modes.frequencies.size(); ++i) {
    const double d = omega - modes.frequencies[i];
    acc += modes.weights[i] * epsilon / (d * d + epsilon * epsilon);
  }
  return acc / (2.0 * std::numbers::pi * modes.mass * omega);
}

// Spreading kernel, exact discrete-mode form.
inline double gamma_kernel(const BathModes& modes, double t) {
  const double m2 = modes.mass * modes.mass;
  double acc = 0.0;
  for (int i = 0; i < modes.frequencies.size(); ++i) {
    const double w = modes.frequencies[i];
    acc += modes.weights[i] / (w * w) * std::cos(w * t);
  }
  return acc / m2;
}

// One-sided transform of gamma, per-mode closed form at z = omega + i eps.
inline std::complex<double> gamma_tilde(const BathModes& modes, double omega,
                                        double epsilon) {
  if (epsilon <= 0)
    throw InvalidParameterError("gamma_tilde: epsilon must be > 0");
  const std::complex<double> z(omega, epsilon);
  const double m2 = modes.mass * modes.mass;
  std::complex<double> acc = 0.0;
  const std::complex<double> iunit(0.0, 1.0);
  for (int i = 0; i < modes.frequencies.size(); ++i) {
    const double w = modes.frequencies[i];
    acc += modes.weights[i] / (w * w) * iunit * z / (z * z - w * w);
  }
  return acc / m2;
}

inline double default_epsilon(double omega0, const Vector& grid) {
  double spacing = 0.0;
  if (grid.size() > 1) spacing = (grid[grid.size() - 1] - grid[0]) / (grid.size() - 1);
  return std::max(1e-3 * omega0, 3.0 * spacing);
}

// Collective spectral density on a positive omega grid; the broadening enters
// through z = omega + i eps substituted throughout the response denominator.
inline SpectrumSeries collective_spectrum(double omega0, const BathModes& modes,
                                          const Vector& omega_grid, double epsilon,
                                          double mass, double hbar) {
  if (omega_grid.size() < 1 || omega_grid[0] <= 0)
    throw InvalidParameterError("collective_spectrum: grid must be positive");
  SpectrumSeries s;
  s.kind = SeriesKind::s_tilde;
  s.epsilon = epsilon;
  s.grid = omega_grid;
  s.values.resize(omega_grid.size());
  const double pref = hbar / (std::numbers::pi * mass);
  const std::complex<double> iunit(0.0, 1.0);
  for (Eigen::Index i = 0; i < omega_grid.size(); ++i) {
    const std::complex<double> z(omega_grid[i], epsilon);
    const std::complex<double> gt = gamma_tilde(modes, omega_grid[i], epsilon);
    const std::complex<double> den = omega0 * omega0 - z * z - iunit * z * gt;
    s.values[i] = pref * std::imag(1.0 / den);
  }
  return s;
}

// Constant-kernel (ohmic) special case; gamma0 provides the width, eps only
// matters for the gamma0 = 0 limit.
inline SpectrumSeries collective_spectrum_constant_kernel(
    double omega0, double gamma0, const Vector& omega_grid, double mass,
    double hbar, double epsilon = 0.0) {
  if (gamma0 < 0)
    throw InvalidParameterError("collective_spectrum_constant_kernel: gamma0 < 0");
  SpectrumSeries s;
  s.kind = SeriesKind::s_tilde;
  s.epsilon = epsilon;
  s.grid = omega_grid;
  s.values.resize(omega_grid.size());
  const double pref = hbar / (std::numbers::pi * mass);
  const std::complex<double> iunit(0.0, 1.0);
  for (Eigen::Index i = 0; i < omega_grid.size(); ++i) {
    const std::complex<double> z(omega_grid[i], epsilon);
    const std::complex<double> den = omega0 * omega0 - z * z - iunit * z * gamma0;
    s.values[i] = pref * std::imag(1.0 / den);
  }
  return s;
}

inline Vector linspace(double lo, double hi, Eigen::Index count) {
  return Vector::LinSpaced(count, lo, hi);
}

}  // namespace collex
