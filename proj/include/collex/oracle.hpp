// oracle.hpp — independent ground truth: exact normal-mode correlators for
// quadratic Hamiltonians, truncated-Fock diagonalization of the anharmonic
// model, and direct checks of the commutator-reduction identity.
//
// The Fock-space operators are assembled per mode: q^k is computed in a
// per-mode basis extended by k levels and then truncated, so every retained
// matrix element of the polynomial interaction is exact at the given cutoff.

#pragma once

#include "collex/groundstate.hpp"
#include "collex/linalg.hpp"
#include "collex/model.hpp"
#include "collex/renormalize.hpp"
#include "collex/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace collex {

struct ModalCorrelator {
  Vector mode_freqs;           // Omega_n > 0
  Vector collective_overlaps;  // c_n, coefficients of X in mass-weighted modes
  Vector weights;              // c_n^2 hbar / (2 m Omega_n)
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stick spectrum of X for a quadratic Hamiltonian with potential matrix V
// (no 1/2 convention): S(t) = sum_n c_n^2 (hbar/2m Omega_n) e^{-i Omega_n t}.
inline ModalCorrelator harmonic_correlator(const Matrix& full_potential,
                                           double mass, double hbar) {
  const Eigen::Index dim = full_potential.rows();
  auto es = eigh(full_potential);
  const Vector& ev = es.eigenvalues();
  const double tol = kZeroModeRelTol * ev.cwiseAbs().maxCoeff();
  const Vector xdir = collective_direction(int(dim / 2));
  const Vector overlap = es.eigenvectors().transpose() * xdir;

  std::vector<double> freqs, cs, ws;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (ev[i] <= tol) {
      if (std::abs(overlap[i]) > 1e-10)
        throw std::runtime_error(
            "harmonic_correlator: collective coordinate overlaps a zero mode");
      continue;
    }
    const double om = std::sqrt(2.0 * ev[i] / mass);
    freqs.push_back(om);
    cs.push_back(overlap[i]);
    ws.push_back(overlap[i] * overlap[i] * hbar / (2.0 * mass * om));
  }
  ModalCorrelator c;
  c.mode_freqs = Eigen::Map<Vector>(freqs.data(), Eigen::Index(freqs.size()));
  c.collective_overlaps = Eigen::Map<Vector>(cs.data(), Eigen::Index(cs.size()));
  c.weights = Eigen::Map<Vector>(ws.data(), Eigen::Index(ws.size()));
  return c;
}

// Sticks broadened with the same complex-frequency Lorentzian used by the
// collective spectrum: (hbar/pi m) sum_n c_n^2 Im 1/(Omega_n^2 - z^2).
inline SpectrumSeries broadened_sticks(const ModalCorrelator& corr,
                                       const Vector& omega_grid, double epsilon,
                                       double mass, double hbar) {
  SpectrumSeries s;
  s.kind = SeriesKind::s_tilde;
  s.epsilon = epsilon;
  s.grid = omega_grid;
  s.values.resize(omega_grid.size());
  const double pref = hbar / (std::numbers::pi * mass);
  for (Eigen::Index k = 0; k < omega_grid.size(); ++k) {
    const std::complex<double> z(omega_grid[k], epsilon);
    double acc = 0.0;
    for (Eigen::Index n = 0; n < corr.mode_freqs.size(); ++n) {
      const double om = corr.mode_freqs[n];
      const double c2 = corr.collective_overlaps[n] * corr.collective_overlaps[n];
      acc += c2 * std::imag(1.0 / (om * om - z * z));
    }
    s.values[k] = pref * acc;
  }
  return s;
}

// --- quantized internal modes -------------------------------------------

// Normal modes retained for quantization: the N-1 internal symmetric-sector
// modes (global COM dropped) and all N antisymmetric-sector modes. For each
// mode we keep the frequency, the coefficients of z_ij = x_i^(1) - x_j^(2)
// and the coefficient of X.
struct QuantizedModes {
  Vector freqs;
  Matrix s_vecs;  // N x (N-1)
  Matrix d_vecs;  // N x N
  int n_sites = 0;
  double mass = 1.0, hbar = 1.0;

  int count() const { return int(freqs.size()); }
  // coefficient of mode c in z_ij
  double z_coeff(int i, int j, int c) const {
    const int ns = int(s_vecs.cols());
    if (c < ns) return (s_vecs(i, c) - s_vecs(j, c)) / std::sqrt(2.0);
    const int cd = c - ns;
    return (d_vecs(i, cd) + d_vecs(j, cd)) / std::sqrt(2.0);
  }
  // coefficient of mode c in X
  double x_coeff(int c) const {
    const int ns = int(s_vecs.cols());
    if (c < ns) return 0.0;
    return d_vecs.col(c - ns).sum() / std::sqrt(double(n_sites));
  }
};

inline QuantizedModes quantized_modes(const Matrix& v_s, const Matrix& v_d,
                                      double mass, double hbar) {
  const int n = int(v_s.rows());
  QuantizedModes qm;
  qm.n_sites = n;
  qm.mass = mass;
  qm.hbar = hbar;
  qm.freqs.resize(2 * n - 1);
  qm.s_vecs.resize(n, n - 1);
  qm.d_vecs.resize(n, n);

  auto es_s = eigh(v_s);
  const double tol_s = kZeroModeRelTol * es_s.eigenvalues().cwiseAbs().maxCoeff();
  int c = 0;
  for (int i = 0; i < n; ++i) {
    const double v = es_s.eigenvalues()[i];
    if (v <= tol_s) continue;  // COM zero mode
    if (c >= n - 1)
      throw std::runtime_error("quantized_modes: expected a single zero mode");
    qm.freqs[c] = std::sqrt(2.0 * v / mass);
    qm.s_vecs.col(c) = es_s.eigenvectors().col(i);
    ++c;
  }
  if (c != n - 1)
    throw InstabilityError("quantized_modes: symmetric sector not PSD with one zero mode");
  auto es_d = eigh(v_d);
  for (int i = 0; i < n; ++i) {
    const double v = es_d.eigenvalues()[i];
    if (v <= 0) throw InstabilityError("quantized_modes: antisymmetric sector not PD");
    qm.freqs[c + i] = std::sqrt(2.0 * v / mass);
    qm.d_vecs.col(i) = es_d.eigenvectors().col(i);
  }
  return qm;
}

inline QuantizedModes quantized_modes(const ChainModel& model) {
  const SectorMatrices sec = sector_matrices(model);
  return quantized_modes(sec.v_s, sec.v_d, model.mass, model.hbar);
}

// b_ij(t) with beta_ij(t) = i hbar b_ij(t), from the normal-mode expansion;
// sign frozen by db/dt(0) = -sqrt(2/N)/m.
inline double beta_function(const QuantizedModes& qm, int i, int j, double t) {
  double acc = 0.0;
  for (int c = 0; c < qm.count(); ++c) {
    const double ab = qm.z_coeff(i, j, c) * qm.x_coeff(c);
    if (ab == 0.0) continue;
    acc -= ab * std::sin(qm.freqs[c] * t) / (qm.mass * qm.freqs[c]);
  }
  return acc;
}

inline double beta_function(const ChainModel& model, int i, int j, double t) {
  return beta_function(quantized_modes(model), i, j, t);
}

inline double beta_function(const ChainModel& model,
                            const RenormalizedSystem& sys, int i, int j,
                            double t) {
  const Matrix mr = sys.m_renorm_diag.asDiagonal();
  const Matrix v_s = symmetrized(Matrix(model.intra_coupling + mr - sys.k_renorm));
  const Matrix v_d = symmetrized(Matrix(model.intra_coupling + mr + sys.k_renorm));
  return beta_function(quantized_modes(v_s, v_d, sys.mass, sys.hbar), i, j, t);
}

// --- truncated Fock machinery -------------------------------------------

namespace fock {

inline constexpr std::size_t kDimensionCap = 200000;

// q^k in the occupation basis, computed in a basis extended by k levels and
// truncated back to dim x dim; exact for all retained elements.
inline Matrix position_power(double length, int k, int dim) {
  const int ext = dim + k;
  Matrix q = Matrix::Zero(ext, ext);
  for (int n = 0; n + 1 < ext; ++n) {
    const double el = length * std::sqrt(double(n + 1));
    q(n, n + 1) = el;
    q(n + 1, n) = el;
  }
  Matrix pw = Matrix::Identity(ext, ext);
  for (int p = 0; p < k; ++p) pw = q * pw;
  return pw.topLeftCorner(dim, dim);
}

struct ProductBasis {
  int n_modes = 0;
  int cutoff = 0;  // per-mode occupation cap n_max
  std::size_t dim = 0;

  ProductBasis(int modes, int n_max) : n_modes(modes), cutoff(n_max) {
    dim = 1;
    for (int c = 0; c < modes; ++c) {
      dim *= std::size_t(n_max + 1);
      if (dim > kDimensionCap)
        throw ResourceError("fock basis exceeds the dimension cap");
    }
  }
  int occupation(std::size_t state, int mode) const {
    for (int c = 0; c < mode; ++c) state /= std::size_t(cutoff + 1);
    return int(state % std::size_t(cutoff + 1));
  }
};

// Kronecker accumulation of coef * prod_c factors[c] into dense `out`.
inline void add_kron_product(Matrix& out, double coef,
                             const std::vector<const Matrix*>& factors,
                             const ProductBasis& basis) {
  const std::size_t dim = basis.dim;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t s = 0; s < dim; ++s) {
      double el = coef;
      for (int c = 0; c < basis.n_modes && el != 0.0; ++c)
        el *= (*factors[std::size_t(c)])(basis.occupation(r, c),
                                         basis.occupation(s, c));
      if (el != 0.0) out(Eigen::Index(r), Eigen::Index(s)) += el;
    }
}

// All compositions of `total` into `parts` nonnegative integers.
inline void compositions(int total, int parts,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> k(std::size_t(parts), 0);
  std::function<void(int, int)> rec = [&](int mode, int remaining) {
    if (mode == parts - 1) {
      k[std::size_t(mode)] = remaining;
      fn(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[std::size_t(mode)] = v;
      rec(mode + 1, remaining - v);
    }
  };
  if (parts > 0) rec(0, total);
}

inline double multinomial(int total, const std::vector<int>& parts) {
  double acc = 1.0;
  int seen = 0;
  for (int p : parts)
    for (int v = 1; v <= p; ++v) acc *= double(++seen) / double(v);
  (void)total;
  return acc;
}

}  // namespace fock

// Operator bundle for the truncated-Fock representation of the model.
struct FockOperators {
  fock::ProductBasis basis;
  Vector h0_diag;  // sum_c hbar omega_c (n_c + 1/2)
  Matrix h1;       // sum_ij f(z_ij)
  Matrix x_op;     // collective coordinate
  QuantizedModes modes;
};

inline FockOperators build_fock_operators(const ChainModel& model, int n_max) {
  const QuantizedModes qm = quantized_modes(model);
  const int nm = qm.count();
  fock::ProductBasis basis(nm, n_max);
  const int dim = int(basis.dim);

  FockOperators ops{basis, Vector(dim), Matrix::Zero(dim, dim),
                    Matrix::Zero(dim, dim), qm};

  for (int s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int c = 0; c < nm; ++c)
      e += model.hbar * qm.freqs[c] * (basis.occupation(std::size_t(s), c) + 0.5);
    ops.h0_diag[s] = e;
  }

  // per-mode position powers q_c^k, k = 0 .. max polynomial degree
  int max_pow = 1;
  if (!model.anharmonic_coeffs.empty())
    max_pow = 2 * (int(model.anharmonic_coeffs.size()) + 1);
  std::vector<std::vector<Matrix>> qpow(static_cast<std::size_t>(nm));
  for (int c = 0; c < nm; ++c) {
    const double len = std::sqrt(model.hbar / (2.0 * model.mass * qm.freqs[c]));
    for (int k = 0; k <= max_pow; ++k)
      qpow[std::size_t(c)].push_back(fock::position_power(len, k, n_max + 1));
  }

  // X = sum_c b_c q_c
  for (int c = 0; c < nm; ++c) {
    const double b = qm.x_coeff(c);
    if (b == 0.0) continue;
    std::vector<const Matrix*> factors(static_cast<std::size_t>(nm));
    for (int cc = 0; cc < nm; ++cc)
      factors[std::size_t(cc)] = &qpow[std::size_t(cc)][cc == c ? 1 : 0];
    fock::add_kron_product(ops.x_op, b, factors, basis);
  }

  // H1 = sum_ij sum_n f_n z_ij^{2n}, multinomial expansion over modes
  const int n_sites = model.n_particles;
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < n_sites; ++j) {
      std::vector<double> a(static_cast<std::size_t>(nm));
      for (int c = 0; c < nm; ++c) a[std::size_t(c)] = qm.z_coeff(i, j, c);
      int two_n = 4;
      for (double fn : model.anharmonic_coeffs) {
        if (fn != 0.0) {
          fock::compositions(two_n, nm, [&](const std::vector<int>& k) {
            double coef = fn * fock::multinomial(two_n, k);
            std::vector<const Matrix*> factors(static_cast<std::size_t>(nm));
            for (int c = 0; c < nm; ++c) {
              const int kc = k[std::size_t(c)];
              if (kc > 0) coef *= std::pow(a[std::size_t(c)], kc);
              factors[std::size_t(c)] = &qpow[std::size_t(c)][kc];
            }
            if (coef != 0.0) fock::add_kron_product(ops.h1, coef, factors, basis);
          });
        }
        two_n += 2;
      }
    }
  ops.h1 = symmetrized(ops.h1);
  return ops;
}

struct FockResult {
  Vector energies;              // ascending
  Vector transition_strengths;  // |<Phi_0| X |Phi_mu>|^2
  int basis_cutoff = 0;
  bool converged = false;
};

namespace fock {

inline FockResult diagonalize_once(const ChainModel& model, int n_max) {
  FockOperators ops = build_fock_operators(model, n_max);
  Matrix h = ops.h1 * model.lambda;
  h.diagonal() += ops.h0_diag;
  auto es = eigh(h);
  const Eigen::Index dim = es.eigenvalues().size();
  FockResult res;
  res.basis_cutoff = n_max;
  res.energies = es.eigenvalues();
  const Vector x0 = ops.x_op * es.eigenvectors().col(0);
  res.transition_strengths.resize(dim);
  for (Eigen::Index mu = 0; mu < dim; ++mu) {
    const double el = es.eigenvectors().col(mu).dot(x0);
    res.transition_strengths[mu] = el * el;
  }
  return res;
}

}  // namespace fock

// Exact diagonalization in the truncated Fock basis; `converged` reflects the
// stability of the lowest gap under n_max -> n_max + 4.
inline FockResult fock_diagonalize(const ChainModel& model, int n_max) {
  FockResult res = fock::diagonalize_once(model, n_max);
  const double gap = res.energies[1] - res.energies[0];
  try {
    const FockResult refined = fock::diagonalize_once(model, n_max + 4);
    const double gap2 = refined.energies[1] - refined.energies[0];
    res.converged = std::abs(gap2 - gap) <= 1e-6 * std::abs(gap2);
  } catch (const ResourceError&) {
    res.converged = false;
  }
  return res;
}

// Both sides of the commutator-reduction identity for the pair (i, j):
// lhs = <0|[[f(z_ij(t1)), X(t)], X(0)]|0> via truncated-basis algebra,
// rhs = Re[ beta(t1-t) beta(t1) ] C_ij = -hbar^2 b(t1-t) b(t1) C_ij.
inline std::pair<double, double> chi_kernel_check(const ChainModel& model,
                                                  int i, int j, double t1,
                                                  double t, int n_max) {
  using CMatrix = DenseMatrix<std::complex<double>>;
  FockOperators ops = build_fock_operators(model, n_max);
  const int dim = int(ops.basis.dim);

  // f(z_ij) alone (H1 holds the sum over pairs, so rebuild for one pair)
  Matrix fz = Matrix::Zero(dim, dim);
  {
    const int nm = ops.modes.count();
    std::vector<std::vector<Matrix>> qpow(static_cast<std::size_t>(nm));
    int max_pow = 2 * (int(model.anharmonic_coeffs.size()) + 1);
    for (int c = 0; c < nm; ++c) {
      const double len =
          std::sqrt(model.hbar / (2.0 * model.mass * ops.modes.freqs[c]));
      for (int k = 0; k <= max_pow; ++k)
        qpow[std::size_t(c)].push_back(fock::position_power(len, k, n_max + 1));
    }
    std::vector<double> a(static_cast<std::size_t>(nm));
    for (int c = 0; c < nm; ++c) a[std::size_t(c)] = ops.modes.z_coeff(i, j, c);
    int two_n = 4;
    for (double fn : model.anharmonic_coeffs) {
      if (fn != 0.0) {
        fock::compositions(two_n, nm, [&](const std::vector<int>& k) {
          double coef = fn * fock::multinomial(two_n, k);
          std::vector<const Matrix*> factors(static_cast<std::size_t>(nm));
          for (int c = 0; c < nm; ++c) {
            const int kc = k[std::size_t(c)];
            if (kc > 0) coef *= std::pow(a[std::size_t(c)], kc);
            factors[std::size_t(c)] = &qpow[std::size_t(c)][kc];
          }
          if (coef != 0.0) fock::add_kron_product(fz, coef, factors, ops.basis);
        });
      }
      two_n += 2;
    }
    fz = symmetrized(fz);
  }

  // interaction picture via the diagonal H0
  auto evolve = [&](const Matrix& op, double time) -> CMatrix {
    CMatrix out(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int s = 0; s < dim; ++s)
        out(r, s) = op(r, s) * std::polar(1.0, (ops.h0_diag[r] - ops.h0_diag[s]) *
                                                   time / model.hbar);
    return out;
  };
  const CMatrix f_t1 = evolve(fz, t1);
  const CMatrix x_t = evolve(ops.x_op, t);
  const CMatrix x_0 = ops.x_op.cast<std::complex<double>>();
  const CMatrix inner = f_t1 * x_t - x_t * f_t1;
  const CMatrix outer = inner * x_0 - x_0 * inner;
  const double lhs = std::real(outer(0, 0));

  const GroundStateStats stats = ground_state_stats(model, AlphaMethod::exact);
  const double b1 = beta_function(ops.modes, i, j, t1 - t);
  const double b2 = beta_function(ops.modes, i, j, t1);
  const double rhs = -model.hbar * model.hbar * b1 * b2 * stats.c(i, j);
  return {lhs, rhs};
}

}  // namespace collex
