#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collex/groundstate.hpp"
#include "collex/oracle.hpp"
#include "collex/renormalize.hpp"
#include "collex/spectral.hpp"

#include "helpers.hpp"

#include <numbers>
#include <random>

using namespace collex;

namespace {

BathModes single_mode(double omega, double weight, double mass = 1.0) {
  BathModes m;
  m.mass = mass;
  m.frequencies = Vector::Constant(1, omega);
  m.weights = Vector::Constant(1, weight);
  return m;
}

BathModes no_modes(double mass = 1.0) {
  BathModes m;
  m.mass = mass;
  m.frequencies.resize(0);
  m.weights.resize(0);
  return m;
}

}  // namespace

TEST_CASE("bath mode extraction") {
  SUBCASE("single pair has no bath") {
    ChainModel m;
    m.n_particles = 1;
    m.intra_coupling = Matrix::Zero(1, 1);
    m.inter_coupling = Matrix::Constant(1, 1, 1.0);
    auto sys = renormalize(m, ground_state_stats(m));
    auto modes = bath_modes(sys, 1.0);
    CHECK(modes.frequencies.size() == 0);
  }
  SUBCASE("decoupled collective mode has zero weights") {
    auto m = build_standard_model(ChainKind::ring, 5, 1.0, 0.7,
                                  CouplingShape::uniform);
    auto sys = renormalize(m, ground_state_stats(m));
    auto modes = bath_modes(sys, 1.0);
    CHECK(modes.weights.cwiseAbs().maxCoeff() < 1e-20);
  }
  SUBCASE("weights resolve the squared coupling vector") {
    std::mt19937_64 rng(12);
    auto m = testutil::random_stable_model(6, 0.02, rng);
    auto sys = renormalize(m, ground_state_stats(m));
    auto modes = bath_modes(sys, 1.0);
    CHECK(modes.weights.sum() ==
          doctest::Approx(4.0 * sys.k_vec.squaredNorm()).epsilon(1e-12));
    CHECK(modes.frequencies.minCoeff() > 0.0);
    CHECK(modes.weights.minCoeff() >= 0.0);
  }
  SUBCASE("N=3 diagonal-K bath matches a direct 2x2 eigensolve") {
    auto m = build_standard_model(ChainKind::open_chain, 3, 1.0, 0.5,
                                  CouplingShape::diagonal);
    auto sys = renormalize(m, ground_state_stats(m));
    auto modes = bath_modes(sys, 1.0);
    auto es = eigh(sys.k_r);
    for (int i = 0; i < 2; ++i) {
      CHECK(modes.frequencies[i] ==
            doctest::Approx(std::sqrt(2.0 * es.eigenvalues()[i])));
      const double ov = 2.0 * sys.k_vec.dot(es.eigenvectors().col(i));
      CHECK(modes.weights[i] == doctest::Approx(ov * ov));
    }
  }
}

TEST_CASE("bath spectral density") {
  SUBCASE("empty bath gives zero") {
    auto m = no_modes();
    CHECK(sigma_R(m, 1.0, 1e-3) == 0.0);
  }
  SUBCASE("epsilon must be positive") {
    CHECK_THROWS_AS(sigma_R(single_mode(1.0, 1.0), 1.0, 0.0),
                    InvalidParameterError);
  }
  SUBCASE("single-mode peak integrates to w/(2 m omega)") {
    auto m = single_mode(1.0, 1.0);
    const double eps = 1e-3;
    // trapezoid over [0.5, 1.5]
    const int npts = 200001;
    double acc = 0.0;
    for (int i = 0; i < npts; ++i) {
      const double w = 0.5 + i * (1.0 / (npts - 1));
      const double v = sigma_R(m, w, eps);
      acc += (i == 0 || i == npts - 1) ? 0.5 * v : v;
    }
    acc /= (npts - 1);
    CHECK(acc == doctest::Approx(0.5).epsilon(2e-3));
  }
  SUBCASE("nonnegative on a dense grid for random stable models") {
    std::mt19937_64 rng(13);
    auto model = testutil::random_stable_model(8, 0.02, rng);
    auto sys = renormalize(model, ground_state_stats(model));
    auto modes = bath_modes(sys, 1.0);
    for (int i = 1; i <= 10000; ++i)
      CHECK(sigma_R(modes, i * 6.0 / 10000.0, 1e-3) >= 0.0);
  }
}

TEST_CASE("spreading kernel") {
  SUBCASE("empty bath: identically zero") {
    CHECK(gamma_kernel(no_modes(), 0.0) == 0.0);
    CHECK(gamma_kernel(no_modes(), 3.7) == 0.0);
  }
  SUBCASE("single-mode value at t = 0") {
    CHECK(gamma_kernel(single_mode(2.0, 4.0), 0.0) == doctest::Approx(1.0));
  }
  SUBCASE("bounded by its value at zero") {
    std::mt19937_64 rng(14);
    auto model = testutil::random_stable_model(6, 0.02, rng);
    auto sys = renormalize(model, ground_state_stats(model));
    auto modes = bath_modes(sys, 1.0);
    const double g0 = gamma_kernel(modes, 0.0);
    for (double t = 0.0; t < 40.0; t += 0.37)
      CHECK(std::abs(gamma_kernel(modes, t)) <= g0 * (1.0 + 1e-12));
  }
  SUBCASE("gamma(0) equals the sigma sum rule") {
    std::mt19937_64 rng(15);
    auto model = testutil::random_stable_model(6, 0.02, rng);
    auto sys = renormalize(model, ground_state_stats(model));
    auto modes = bath_modes(sys, 1.0);
    const double g0 = gamma_kernel(modes, 0.0);
    // (2/m) int sigma(w)/w dw, trapezoid on a fine grid with small epsilon
    const double eps = 1e-5;
    const double wmax = modes.frequencies.maxCoeff() * 3.0;
    const int npts = 2000001;
    double acc = 0.0;
    const double h = (wmax - 1e-4) / (npts - 1);
    for (int i = 0; i < npts; ++i) {
      const double w = 1e-4 + i * h;
      const double v = sigma_R(modes, w, eps) / w;
      acc += (i == 0 || i == npts - 1) ? 0.5 * v : v;
    }
    acc *= h * 2.0 / modes.mass;
    CHECK(acc == doctest::Approx(g0).epsilon(1e-3));
  }
}

TEST_CASE("one-sided kernel transform") {
  SUBCASE("empty bath is zero") {
    CHECK(std::abs(gamma_tilde(no_modes(), 1.0, 1e-6)) == 0.0);
  }
  SUBCASE("epsilon must be positive") {
    CHECK_THROWS_AS(gamma_tilde(single_mode(1.0, 1.0), 1.0, -1.0),
                    InvalidParameterError);
  }
  SUBCASE("vanishes at zero frequency off resonance") {
    const auto v = gamma_tilde(single_mode(1.0, 1.0), 0.0, 1e-6);
    CHECK(std::abs(v) < 1e-5);
  }
  SUBCASE("matches the numeric one-sided Fourier integral") {
    std::mt19937_64 rng(16);
    auto model = testutil::random_stable_model(4, 0.02, rng);
    auto sys = renormalize(model, ground_state_stats(model));
    auto modes = bath_modes(sys, 1.0);
    const double eps = 1e-2;
    const double tmax = 2000.0;  // e^{-eps t} decayed below 1e-8
    const int npts = 2000001;
    const double dt = tmax / (npts - 1);
    for (double omega : {0.1, 0.8, 2.0, 5.0}) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < npts; ++i) {
        const double t = i * dt;
        const std::complex<double> v =
            gamma_kernel(modes, t) *
            std::polar(std::exp(-eps * t), omega * t);
        acc += (i == 0 || i == npts - 1) ? 0.5 * v : v;
      }
      acc *= dt;
      const auto closed = gamma_tilde(modes, omega, eps);
      CHECK(std::abs(closed - acc) <= 1e-3 * std::max(std::abs(closed), 1e-3));
    }
  }
}

TEST_CASE("collective spectrum") {
  SUBCASE("no bath: single peak carrying hbar/(2 m Omega0)") {
    const double om0 = 2.0;
    const auto grid = linspace(0.5, 4.0, 20000);
    const double eps = 1e-3 * om0;
    auto s = collective_spectrum(om0, no_modes(), grid, eps, 1.0, 1.0);
    // peak location
    Eigen::Index imax = 0;
    s.values.maxCoeff(&imax);
    CHECK(s.grid[imax] == doctest::Approx(om0).epsilon(1e-3));
    // integrated weight
    double acc = 0.0;
    const double h = s.grid[1] - s.grid[0];
    for (Eigen::Index i = 0; i < s.grid.size(); ++i)
      acc += (i == 0 || i == s.grid.size() - 1) ? 0.5 * s.values[i] : s.values[i];
    acc *= h;
    CHECK(acc == doctest::Approx(1.0 / (2.0 * om0)).epsilon(1e-3));
  }
  SUBCASE("values are nonnegative up to broadening artifacts") {
    std::mt19937_64 rng(18);
    auto model = testutil::random_stable_model(8, 0.02, rng);
    auto sys = renormalize(model, ground_state_stats(model));
    auto modes = bath_modes(sys, 1.0);
    const auto grid = linspace(0.05, 6.0, 4000);
    auto s = collective_spectrum(sys.omega0_renorm, modes, grid,
                                 default_epsilon(sys.omega0_renorm, grid), 1.0,
                                 1.0);
    const double floor = -1e-12 * s.values.maxCoeff();
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
      CHECK(s.values[i] >= floor);
  }
  SUBCASE("grid must be positive") {
    CHECK_THROWS_AS(collective_spectrum(1.0, no_modes(), linspace(0.0, 1.0, 5),
                                        1e-3, 1.0, 1.0),
                    InvalidParameterError);
  }
}

TEST_CASE("constant-kernel spectrum") {
  SUBCASE("Lorentzian peak position and width") {
    const double om0 = 2.0, g0 = 0.2;
    const auto grid = linspace(1.0, 3.0, 400001);
    auto s = collective_spectrum_constant_kernel(om0, g0, grid, 1.0, 1.0);
    Eigen::Index imax = 0;
    const double peak = s.values.maxCoeff(&imax);
    CHECK(s.grid[imax] ==
          doctest::Approx(std::sqrt(om0 * om0 - 0.25 * g0 * g0)).epsilon(1e-4));
    // FWHM
    Eigen::Index lo = imax, hi = imax;
    while (lo > 0 && s.values[lo] > peak / 2) --lo;
    while (hi + 1 < s.grid.size() && s.values[hi] > peak / 2) ++hi;
    CHECK(s.grid[hi] - s.grid[lo] == doctest::Approx(g0).epsilon(0.05));
  }
  SUBCASE("halving gamma0 doubles the peak height") {
    const double om0 = 2.0;
    const auto grid = linspace(1.5, 2.5, 200001);
    const double p1 =
        collective_spectrum_constant_kernel(om0, 0.2, grid, 1.0, 1.0)
            .values.maxCoeff();
    const double p2 =
        collective_spectrum_constant_kernel(om0, 0.1, grid, 1.0, 1.0)
            .values.maxCoeff();
    CHECK(p2 / p1 == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("gamma0 = 0 with tiny broadening is a grid-limited spike") {
    const auto grid = linspace(1.0, 3.0, 2001);
    auto s = collective_spectrum_constant_kernel(2.0, 0.0, grid, 1.0, 1.0, 1e-4);
    Eigen::Index imax = 0;
    s.values.maxCoeff(&imax);
    CHECK(std::abs(s.grid[imax] - 2.0) <= grid[1] - grid[0]);
  }
  SUBCASE("negative gamma0 is rejected") {
    CHECK_THROWS_AS(collective_spectrum_constant_kernel(
                        2.0, -0.1, linspace(1.0, 2.0, 3), 1.0, 1.0),
                    InvalidParameterError);
  }
}

TEST_CASE("orthogonal basis invariance of the bath description") {
  // replacing the DCT's non-collective columns by any orthonormal basis of
  // the complement leaves sigma, gamma, gamma_tilde and Omega0 unchanged
  std::mt19937_64 rng(21);
  const int n = 6;
  auto model = testutil::random_stable_model(n, 0.02, rng);
  auto stats = ground_state_stats(model);
  auto [kr, mr] = renormalized_couplings(model, stats.c);
  auto sys = collective_transform(model, kr, mr);
  auto modes = bath_modes(sys, 1.0);

  // rotated variant
  const Matrix small = Matrix::Random(n - 1, n - 1);
  const Matrix qsub = Eigen::HouseholderQR<Matrix>(small).householderQ();
  RenormalizedSystem rot = sys;
  Matrix blk = Matrix::Identity(n, n);
  blk.bottomRightCorner(n - 1, n - 1) = qsub;
  rot.ktilde = symmetrized(Matrix(blk.transpose() * sys.ktilde * blk));
  rot.k_r = rot.ktilde.bottomRightCorner(n - 1, n - 1);
  rot.k_vec = rot.ktilde.col(0).tail(n - 1);
  auto modes_rot = bath_modes(rot, 1.0);

  const double schur_rot =
      rot.ktilde(0, 0) - rot.k_vec.dot(rot.k_r.ldlt().solve(rot.k_vec));
  CHECK(std::sqrt(2.0 * schur_rot) ==
        doctest::Approx(sys.omega0_renorm).epsilon(1e-10));
  for (double t : {0.0, 0.9, 4.2})
    CHECK(gamma_kernel(modes_rot, t) ==
          doctest::Approx(gamma_kernel(modes, t)).epsilon(1e-10));
  for (double w : {0.3, 1.1, 2.7}) {
    CHECK(sigma_R(modes_rot, w, 1e-3) ==
          doctest::Approx(sigma_R(modes, w, 1e-3)).epsilon(1e-10));
    const auto g1 = gamma_tilde(modes_rot, w, 1e-3);
    const auto g2 = gamma_tilde(modes, w, 1e-3);
    CHECK(std::abs(g1 - g2) <= 1e-10 * std::max(1.0, std::abs(g2)));
  }
}
