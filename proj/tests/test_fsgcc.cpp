#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numbers>
#include <sstream>

#include "fsgcc/fsgcc.hpp"
#include "fsgcc/rng.hpp"
#include "oracles.hpp"

using namespace fsgcc;

TEST_CASE("num_bands") {
  CHECK(num_bands(2048, 64, 32) == 32);
  CHECK(num_bands(2048, 128, 32) == 31);
  // no-overlap tiling with B dividing N/2
  CHECK(num_bands(2048, 128, 128) == 8);
  CHECK(num_bands(2048, 128, 128) == 2048 / (2 * 128));
  CHECK_THROWS_AS(num_bands(2048, 129, 32), std::invalid_argument);
  CHECK_THROWS_AS(num_bands(2048, 128, 256), std::invalid_argument);
}

TEST_CASE("subband_gcc") {
  SUBCASE("full-support rectangular band 0 reduces to the conventional GCC") {
    const int n = 256;
    Rng rng(5);
    // Confine the spectrum to the window's unit-gain region so the band-0
    // slice is an identity filter.
    const SpectralWindow win = make_spectral_window(WindowKind::rectangular, n - 2, 32, n);
    PhatSpectrum psi = oracles::random_psi(n, rng);
    for (int kp : {n / 2, n / 2 - 1, -(n / 2 - 1)})
      psi.psi[(kp + n) % n] = 0.0;  // Nyquist and half-gain edge bins
    const Eigen::VectorXcd r0 = subband_gcc(psi, win, 0);
    const Gcc ref = conventional_gcc(psi);
    CHECK((r0.real() - ref.values).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(r0.imag().cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("ideal input: sub-band magnitude is the shifted window response") {
    const int n = 512;
    const int tau0 = 40;
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    const PhatSpectrum psi = oracles::phasor_psi(n, tau0);
    const IdealFsGcc ideal = ideal_fsgcc(tau0, win);
    const int L = num_bands(n, 64, 32);
    for (int l = 0; l < L; ++l) {
      const Eigen::VectorXcd r = subband_gcc(psi, win, l);
      CHECK((r.cwiseAbs() - ideal.phi0.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("matches the direct summation oracle") {
    const int n = 256;
    Rng rng(17);
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 32, 8, n);
    const PhatSpectrum psi = oracles::random_psi(n, rng);
    for (int l : {0, 3, num_bands(n, 32, 8) - 1}) {
      const Eigen::VectorXcd fast = subband_gcc(psi, win, l);
      const Eigen::VectorXcd slow = oracles::direct_subband_gcc(psi, win, l);
      CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  SUBCASE("band index out of range") {
    const int n = 256;
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 32, 8, n);
    const PhatSpectrum psi = oracles::phasor_psi(n, 0);
    CHECK_THROWS_AS(subband_gcc(psi, win, -1), std::out_of_range);
    CHECK_THROWS_AS(subband_gcc(psi, win, num_bands(n, 32, 8)), std::out_of_range);
  }
}

TEST_CASE("build_fsgcc_matrix") {
  SUBCASE("all columns peak at the true delay") {
    const int n = 2048;
    const int tau0 = 40;
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    const FsGccMatrix mat = build_fsgcc_matrix(oracles::phasor_psi(n, tau0), win);
    CHECK(mat.L == 32);
    for (int l = 0; l < mat.L; ++l) {
      int best = 0;
      for (int i = 1; i < n; ++i)
        if (std::abs(mat.R(i, l)) > std::abs(mat.R(best, l))) best = i;
      CHECK(index_to_lag(best, n) == tau0);
    }
  }

  SUBCASE("unit spectrum gives window responses at lag zero") {
    const int n = 512;
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    PhatSpectrum psi;
    psi.psi = Eigen::VectorXcd::Ones(n);
    const FsGccMatrix mat = build_fsgcc_matrix(psi, win);
    for (int l = 0; l < mat.L; ++l) {
      CHECK((mat.R.col(l).real() - win.phi_lag).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(mat.R.col(l).imag().cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("ideal matrix is numerically rank one") {
    const int n = 512;
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 16, n);
    const FsGccMatrix mat = build_fsgcc_matrix(oracles::phasor_psi(n, -100), win);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat.R);
    const auto& sv = svd.singularValues();
    CHECK(sv[1] / sv[0] <= 1e-10);
  }
}

TEST_CASE("ideal_fsgcc") {
  const int n = 512;

  SUBCASE("zero delay: all columns equal the window response") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    const IdealFsGcc ideal = ideal_fsgcc(0, win);
    CHECK((ideal.phi0 - win.phi_lag).cwiseAbs().maxCoeff() == 0.0);
    for (int l = 0; l < ideal.matrix.L; ++l) {
      CHECK(std::abs(ideal.e[l] - 1.0) == 0.0);
      CHECK((ideal.matrix.R.col(l).real() - win.phi_lag).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("matches the construction from a pure linear-phase spectrum") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    for (int tau0 : {40, -40, 255, -256}) {
      const IdealFsGcc ideal = ideal_fsgcc(tau0, win);
      const FsGccMatrix built = build_fsgcc_matrix(oracles::phasor_psi(n, tau0), win);
      CHECK((ideal.matrix.R - built.R).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("phase law across bands at the speech-example configuration") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 128, 32, 2048);
    const int tau0 = 92;
    const IdealFsGcc ideal = ideal_fsgcc(tau0, win);
    const int peak = lag_to_index(tau0, 2048);
    for (int l = 0; l < ideal.matrix.L; ++l) {
      const std::complex<double> ratio =
          ideal.matrix.R(peak, l) / ideal.matrix.R(peak, 0);
      const auto expect = std::polar(1.0, -2.0 * std::numbers::pi * l * 32 * tau0 / 2048.0);
      CHECK(std::abs(ratio - expect) < 1e-9);
    }
  }
}

TEST_CASE("synthesize_noisy_fsgcc") {
  const int n = 512;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
  const IdealFsGcc ideal = ideal_fsgcc(40, win);
  const int L = ideal.matrix.L;

  SUBCASE("alphas of one reproduce the ideal matrix exactly") {
    const auto [noisy, model] =
        synthesize_noisy_fsgcc(ideal, Eigen::VectorXd::Ones(L), 99);
    CHECK((noisy.R - ideal.matrix.R).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("pure noise columns carry the window energy") {
    const auto [noisy, model] =
        synthesize_noisy_fsgcc(ideal, Eigen::VectorXd::Zero(L), 1234);
    const double phi_norm = std::sqrt(window_norm_sq(win));
    for (int l = 0; l < L; ++l) {
      CHECK(noisy.R.col(l).norm() ==
            doctest::Approx(phi_norm).epsilon(1e-9));
      CHECK(model.noise_cols.col(l).norm() ==
            doctest::Approx(phi_norm).epsilon(1e-9));
    }
  }

  SUBCASE("binary alphas: dominant eigenvalue tracks the live band count") {
    const int lg = L / 2;
    Eigen::VectorXd alphas = Eigen::VectorXd::Zero(L);
    alphas.head(lg).setOnes();
    const double target = lg * window_norm_sq(win);
    double mean_ratio = 0.0;
    const int seeds = 25;
    for (int s = 0; s < seeds; ++s) {
      const auto [noisy, model] = synthesize_noisy_fsgcc(ideal, alphas, 100 + s);
      // R^H R shares the nonzero spectrum of R R^H and is only L x L
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(noisy.R.adjoint() * noisy.R);
      mean_ratio += eig.eigenvalues().maxCoeff() / target;
    }
    mean_ratio /= seeds;
    CHECK(mean_ratio == doctest::Approx(1.0).epsilon(0.05));
  }

  SUBCASE("deterministic in the seed") {
    Eigen::VectorXd alphas = Eigen::VectorXd::Constant(L, 0.5);
    const auto [a, ma] = synthesize_noisy_fsgcc(ideal, alphas, 7);
    const auto [b, mb] = synthesize_noisy_fsgcc(ideal, alphas, 7);
    CHECK((a.R - b.R).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("cola reconstruction") {
  const int n = 512;
  Rng rng(23);

  SUBCASE("rectangular tiling reconstructs the covered-band GCC") {
    const SpectralWindow win = make_spectral_window(WindowKind::rectangular, 32, 32, n);
    const PhatSpectrum psi = oracles::random_psi(n, rng);
    const FsGccMatrix mat = build_fsgcc_matrix(psi, win);
    const Gcc rec = cola_reconstruct(mat);

    const ColaProfile profile = cola_profile(win, mat.L);
    PhatSpectrum masked = psi;
    for (int k = 0; k < n; ++k) {
      const int mirror = (n - k) % n;
      if (!profile.covered[k] && !profile.covered[mirror]) masked.psi[k] = 0.0;
    }
    const Gcc ref = conventional_gcc(masked);
    CHECK((rec.values - ref.values).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("hann at 50% overlap reconstructs over the interior") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    const PhatSpectrum psi = oracles::random_psi(n, rng);
    const FsGccMatrix mat = build_fsgcc_matrix(psi, win);
    const Gcc rec = cola_reconstruct(mat);

    const ColaProfile profile = cola_profile(win, mat.L);
    CHECK(profile.ripple < 1e-12);
    CHECK(profile.constant == doctest::Approx(1.0));
    PhatSpectrum masked = psi;
    for (int k = 0; k < n; ++k) {
      const int mirror = (n - k) % n;
      if (!profile.covered[k] && !profile.covered[mirror]) masked.psi[k] = 0.0;
    }
    const Gcc ref = conventional_gcc(masked);
    CHECK((rec.values - ref.values).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("ideal spectrum: reconstruction peaks at the true delay") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
    const FsGccMatrix mat = build_fsgcc_matrix(oracles::phasor_psi(n, 40), win);
    const Gcc rec = cola_reconstruct(mat);
    CHECK(rec.peak_lag == 40);
  }

  SUBCASE("non-COLA hop is rejected with the measured ripple") {
    const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 48, n);
    const FsGccMatrix mat = build_fsgcc_matrix(oracles::phasor_psi(n, 10), win);
    CHECK_THROWS_AS(cola_reconstruct(mat), std::runtime_error);
  }
}

TEST_CASE("matrix csv dump") {
  const int n = 16;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 4, 2, n);
  const FsGccMatrix mat = build_fsgcc_matrix(oracles::phasor_psi(n, 1), win);
  std::ostringstream os;
  write_matrix_csv(mat, os);
  const std::string text = os.str();
  CHECK(text.substr(0, 15) == "lag,band,re,im\n");
  size_t rows = std::count(text.begin(), text.end(), '\n');
  CHECK(rows == static_cast<size_t>(1 + n * mat.L));
}
