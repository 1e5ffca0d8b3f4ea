// dynamics.hpp — classical motion of the collective coordinate.
//
// Two independent routes: the memory-kernel equation
//   X'' + Omega0^2 X + int_0^t gamma(t-s) X'(s) ds = 0
// integrated with an implicit trapezoid scheme (O(steps^2) memory sum), and
// the exact normal-mode evolution of the full renormalized system. With the
// internal modes started at their conditional equilibrium the two agree.

#pragma once

#include "collex/linalg.hpp"
#include "collex/renormalize.hpp"
#include "collex/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace collex {

struct GLEProblem {
  double omega0 = 0.0;  // Omega0^R
  BathModes modes;      // defines gamma via its closed form
  double x0 = 0.0;
  double v0 = 0.0;
  double t_max = 0.0;
  double dt = 0.0;
};

struct Trajectory {
  Vector times;
  Vector x;
  Vector v;
};

inline void check_gle_problem(const GLEProblem& p) {
  if (p.dt <= 0 || p.t_max < p.dt)
    throw InvalidParameterError("solve_gle: need dt > 0 and t_max >= dt");
  double omega_max = p.omega0;
  for (Eigen::Index i = 0; i < p.modes.frequencies.size(); ++i)
    omega_max = std::max(omega_max, p.modes.frequencies[i]);
  if (omega_max > 0 && p.dt > 2.0 * std::numbers::pi / (20.0 * omega_max))
    throw InvalidParameterError("solve_gle: dt too large for the fastest mode");
}

inline Trajectory solve_gle(const GLEProblem& p) {
  check_gle_problem(p);
  const auto steps = Eigen::Index(std::floor(p.t_max / p.dt + 0.5)) + 1;
  const double dt = p.dt;
  const double om2 = p.omega0 * p.omega0;
  const double g0 = gamma_kernel(p.modes, 0.0);

  // kernel values at node offsets, evaluated once
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (Eigen::Index j = 0; j < steps; ++j) g[size_t(j)] = gamma_kernel(p.modes, dt * j);

  Trajectory traj;
  traj.times.resize(steps);
  traj.x.resize(steps);
  traj.v.resize(steps);
  traj.x[0] = p.x0;
  traj.v[0] = p.v0;
  traj.times[0] = 0.0;
  double a_prev = -om2 * p.x0;  // memory integral vanishes at t = 0

  const bool has_memory = p.modes.frequencies.size() > 0;
  for (Eigen::Index n = 0; n + 1 < steps; ++n) {
    const double xn = traj.x[n], vn = traj.v[n];
    // trapezoid memory sum at t_{n+1}, excluding the implicit V_{n+1} node
    double mem = 0.0;
    if (has_memory) {
      mem = 0.5 * g[size_t(n + 1)] * traj.v[0];
      for (Eigen::Index j = 1; j <= n; ++j) mem += g[size_t(n + 1 - j)] * traj.v[j];
      mem *= dt;
    }
    const double rhs = vn + 0.5 * dt * a_prev +
                       0.5 * dt * (-om2 * (xn + 0.5 * dt * vn) - mem);
    const double vnew = rhs / (1.0 + 0.25 * dt * dt * (om2 + g0));
    const double xnew = xn + 0.5 * dt * (vn + vnew);
    const double anew = -om2 * xnew - (mem + 0.5 * dt * g0 * vnew);
    traj.x[n + 1] = xnew;
    traj.v[n + 1] = vnew;
    traj.times[n + 1] = dt * (n + 1);
    a_prev = anew;
  }
  return traj;
}

struct FullState {
  Vector q;  // 2N site coordinates (chain 1 then chain 2)
  Vector v;  // 2N site velocities
};

// Exact linear evolution of the full renormalized system via normal modes;
// returns the collective projection X(t) and its velocity.
inline Trajectory solve_full_classical(const RenormalizedSystem& sys,
                                       const FullState& init,
                                       const Vector& t_grid) {
  const Eigen::Index dim = sys.full_potential.rows();
  if (init.q.size() != dim || init.v.size() != dim)
    throw InvalidParameterError("solve_full_classical: state size mismatch");
  auto es = eigh(sys.full_potential);
  const Matrix& u = es.eigenvectors();
  const Vector& ev = es.eigenvalues();
  const double tol = kZeroModeRelTol * ev.cwiseAbs().maxCoeff();

  const Vector xdir = collective_direction(int(dim / 2));
  const Vector overlap = u.transpose() * xdir;  // X in modal coordinates
  const Vector c0 = u.transpose() * init.q;
  const Vector cv0 = u.transpose() * init.v;

  Trajectory traj;
  traj.times = t_grid;
  traj.x.setZero(t_grid.size());
  traj.v.setZero(t_grid.size());
  for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    double x = 0.0, v = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(overlap[i]) < 1e-14) continue;  // X is zero-mode free
      if (ev[i] <= tol) {
        x += overlap[i] * (c0[i] + cv0[i] * t);
        v += overlap[i] * cv0[i];
      } else {
        const double w = std::sqrt(2.0 * ev[i] / sys.mass);
        x += overlap[i] * (c0[i] * std::cos(w * t) + cv0[i] / w * std::sin(w * t));
        v += overlap[i] * (-c0[i] * w * std::sin(w * t) + cv0[i] * std::cos(w * t));
      }
    }
    traj.x[k] = x;
    traj.v[k] = v;
  }
  return traj;
}

// Closed-form evolution of the full state to time t (t may be negative).
inline FullState evolve_full_state(const RenormalizedSystem& sys,
                                   const FullState& init, double t) {
  const Eigen::Index dim = sys.full_potential.rows();
  auto es = eigh(sys.full_potential);
  const Matrix& u = es.eigenvectors();
  const Vector& ev = es.eigenvalues();
  const double tol = kZeroModeRelTol * ev.cwiseAbs().maxCoeff();
  Vector c = u.transpose() * init.q;
  Vector cv = u.transpose() * init.v;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (ev[i] <= tol) {
      c[i] += cv[i] * t;
    } else {
      const double w = std::sqrt(2.0 * ev[i] / sys.mass);
      const double c0 = c[i], v0 = cv[i];
      c[i] = c0 * std::cos(w * t) + v0 / w * std::sin(w * t);
      cv[i] = -c0 * w * std::sin(w * t) + v0 * std::cos(w * t);
    }
  }
  return {u * c, u * cv};
}

// Initial condition with X(0) = x0 and the internal antisymmetric modes at
// their static equilibrium given that displacement, all velocities zero.
// This is the unique forcing-free start for the memory-kernel equation.
inline FullState equilibrium_bath_init(const RenormalizedSystem& sys, double x0) {
  const int n = int(sys.ktilde.rows());
  Vector qt = Vector::Zero(n);  // DCT coordinates of the antisymmetric sector
  qt[0] = x0;
  if (n > 1) {
    Eigen::LDLT<Matrix> ldlt(sys.k_r);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw InstabilityError("equilibrium_bath_init: singular internal block");
    qt.tail(n - 1) = -x0 * ldlt.solve(sys.k_vec);
  }
  const Vector d = dct_matrix(n) * qt;  // site antisymmetric coordinates
  FullState state;
  state.q.resize(2 * n);
  state.q.head(n) = d / std::sqrt(2.0);
  state.q.tail(n) = -d / std::sqrt(2.0);
  state.v = Vector::Zero(2 * n);
  return state;
}

// Residual of the memory-kernel equation at t = 0+ for a zero-velocity start:
// X''(0) + Omega0^2 X(0) (the memory term vanishes identically).
inline double gle_initial_residual(const RenormalizedSystem& sys,
                                   const FullState& init) {
  const int n = int(sys.ktilde.rows());
  const Vector xdir = collective_direction(n);
  const double x0 = xdir.dot(init.q);
  // acceleration: q'' = -(2/m) V q, projected on X
  const double xddot = -2.0 / sys.mass * xdir.dot(sys.full_potential * init.q);
  return xddot + sys.omega0_renorm * sys.omega0_renorm * x0;
}

// Hann-windowed discrete Fourier magnitude of x(t).
inline SpectrumSeries spectrum_from_trajectory(const Trajectory& traj) {
  const Eigen::Index n = traj.times.size();
  if (n < 2) throw InvalidParameterError("spectrum_from_trajectory: too short");
  const double dt = traj.times[1] - traj.times[0];
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * dt)
      throw InvalidParameterError("spectrum_from_trajectory: non-uniform grid");

  Vector windowed(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    windowed[i] = h * traj.x[i];
  }
  const Eigen::Index nfreq = n / 2 + 1;
  SpectrumSeries s;
  s.kind = SeriesKind::s_tilde;
  s.grid.resize(nfreq);
  s.values.resize(nfreq);
  for (Eigen::Index k = 0; k < nfreq; ++k) {
    const double w = 2.0 * std::numbers::pi * k / (dt * n);
    std::complex<double> acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      acc += windowed[i] * std::polar(1.0, -w * traj.times[i]);
    s.grid[k] = w;
    s.values[k] = std::abs(acc) * dt;
  }
  return s;
}

inline double dominant_frequency(const SpectrumSeries& s) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < s.grid.size(); ++k)
    if (s.values[k] > s.values[best]) best = k;
  return s.grid[best];
}

}  // namespace collex
