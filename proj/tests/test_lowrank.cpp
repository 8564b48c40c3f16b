#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "fsgcc/lowrank.hpp"
#include "fsgcc/rng.hpp"
#include "oracles.hpp"

using namespace fsgcc;

namespace {

FsGccMatrix wrap_matrix(const Eigen::MatrixXcd& r, const SpectralWindow& win) {
  FsGccMatrix mat;
  mat.R = r;
  mat.window = win;
  mat.L = static_cast<int>(r.cols());
  for (int l = 0; l < mat.L; ++l) mat.band_center_bins.push_back(l * win.M);
  return mat;
}

}  // namespace

TEST_CASE("estimate_band_weights") {
  const int n = 512;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);
  const IdealFsGcc ideal = ideal_fsgcc(40, win);
  const int L = ideal.matrix.L;

  SUBCASE("ideal columns get full confidence") {
    const BandWeights w = estimate_band_weights(ideal.matrix);
    for (int l = 0; l < L; ++l) CHECK(w.w[l] == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("pure noise columns average near zero confidence") {
    double mean = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
      const auto [noisy, model] =
          synthesize_noisy_fsgcc(ideal, Eigen::VectorXd::Zero(L), 5000 + s);
      mean += estimate_band_weights(noisy).w.mean();
    }
    mean /= seeds;
    CHECK(mean < 0.1);
    CHECK(mean >= 0.0);
  }

  SUBCASE("columns louder than the noise mean clamp to zero") {
    FsGccMatrix mat = ideal.matrix;
    mat.R.col(2).setConstant(std::complex<double>(1.0, 0.0));  // huge mean magnitude
    const BandWeights w = estimate_band_weights(mat);
    CHECK(w.w[2] == 0.0);
  }

  SUBCASE("weights are monotone in the mixing coefficient on average") {
    const std::vector<double> alpha_grid{1.0, 0.75, 0.5, 0.25, 0.0};
    Eigen::VectorXd mean_w = Eigen::VectorXd::Zero(5);
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      Eigen::VectorXd alphas(L);
      for (int l = 0; l < L; ++l) alphas[l] = alpha_grid[l % 5];
      const auto [noisy, model] = synthesize_noisy_fsgcc(ideal, alphas, 900 + s);
      const BandWeights w = estimate_band_weights(noisy);
      for (int l = 0; l < L; ++l) mean_w[l % 5] += w.w[l];
    }
    for (int g = 0; g + 1 < 5; ++g) CHECK(mean_w[g] >= mean_w[g + 1]);
  }
}

TEST_CASE("svd_rank1_extract") {
  const int n = 512;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);

  SUBCASE("ideal matrix: dominant factor is the shifted window response") {
    const IdealFsGcc ideal = ideal_fsgcc(40, win);
    const RankOneFactors f = svd_rank1_extract(ideal.matrix);
    const int L = ideal.matrix.L;
    // sigma1^2 = L ||phi||^2
    const double expect = L * window_norm_sq(win);
    CHECK(f.sigmas[0] * f.sigmas[0] == doctest::Approx(expect).epsilon(1e-9));
    // u1 parallel to phi0 (up to a unit phasor)
    const Eigen::VectorXcd u1 = f.a1 / f.sigmas[0];
    const double cosine = std::abs(u1.dot(ideal.phi0.cast<std::complex<double>>())) /
                          ideal.phi0.norm();
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("scaling the matrix scales sigma1 and leaves u1 fixed") {
    const IdealFsGcc ideal = ideal_fsgcc(-10, win);
    Rng rng(4);
    auto [noisy, model] =
        synthesize_noisy_fsgcc(ideal, Eigen::VectorXd::Constant(ideal.matrix.L, 0.7), 5);
    const RankOneFactors f1 = svd_rank1_extract(noisy);
    FsGccMatrix scaled = noisy;
    scaled.R *= 3.5;
    const RankOneFactors f2 = svd_rank1_extract(scaled);
    CHECK(f2.sigmas[0] == doctest::Approx(3.5 * f1.sigmas[0]).epsilon(1e-12));
    const Eigen::VectorXcd u1 = f1.a1 / f1.sigmas[0];
    const Eigen::VectorXcd u2 = f2.a1 / f2.sigmas[0];
    CHECK(std::abs(std::abs(u1.dot(u2)) - 1.0) < 1e-10);
  }

  SUBCASE("zero matrix is rejected") {
    FsGccMatrix mat = wrap_matrix(Eigen::MatrixXcd::Zero(32, 4), win);
    CHECK_THROWS_WITH_AS(svd_rank1_extract(mat), "empty spectrum", std::runtime_error);
  }

  SUBCASE("rank-one residual beats random rank-one candidates") {
    Rng rng(77);
    for (int rep = 0; rep < 4; ++rep) {
      const int rows = rng.uniform_int(8, 32);
      const int cols = rng.uniform_int(2, 6);
      const Eigen::MatrixXcd r = oracles::random_complex_matrix(rows, cols, rng);
      const FsGccMatrix mat = wrap_matrix(r, win);
      const RankOneFactors f = svd_rank1_extract(mat);
      const double svd_residual = (r - target_component(f)).norm();
      const double frob2 = r.squaredNorm();
      for (int trial = 0; trial < 10000; ++trial) {
        Eigen::VectorXcd a(rows), b(cols);
        for (int i = 0; i < rows; ++i) a[i] = rng.cgaussian();
        for (int i = 0; i < cols; ++i) b[i] = rng.cgaussian();
        a.normalize();
        b.normalize();
        // best scaling for this direction pair: residual^2 = ||R||^2 - |a^H R b|^2
        const double cand = std::sqrt(
            std::max(0.0, frob2 - std::norm((a.adjoint() * r * b)(0, 0))));
        CHECK(svd_residual <= cand + 1e-9);
      }
    }
  }
}

TEST_CASE("wsvd_rank1_extract") {
  const int n = 256;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 32, 16, n);

  SUBCASE("unit weights reproduce the plain SVD target") {
    const IdealFsGcc ideal = ideal_fsgcc(12, win);
    auto [noisy, model] = synthesize_noisy_fsgcc(
        ideal, Eigen::VectorXd::Constant(ideal.matrix.L, 0.8), 11);
    BandWeights w;
    w.w = Eigen::VectorXd::Ones(noisy.L);
    const RankOneFactors plain = svd_rank1_extract(noisy);
    const RankOneFactors weighted = wsvd_rank1_extract(noisy, w);
    CHECK((target_component(plain) - target_component(weighted)).cwiseAbs().maxCoeff() <
          1e-9);
  }

  SUBCASE("matches the ALS oracle on small weighted problems") {
    Rng rng(31);
    for (const auto [rows, cols] : {std::pair{4, 2}, std::pair{8, 3}}) {
      for (int rep = 0; rep < 5; ++rep) {
        const Eigen::MatrixXcd r = oracles::random_complex_matrix(rows, cols, rng);
        BandWeights w;
        w.w.resize(cols);
        for (int l = 0; l < cols; ++l) w.w[l] = rng.uniform(0.05, 1.0);
        const FsGccMatrix mat = wrap_matrix(r, win);
        const RankOneFactors f = wsvd_rank1_extract(mat, w);
        const double ours = oracles::weighted_residual(r, f.a1, f.b1, w.w);
        const double oracle = oracles::als_weighted_rank1_residual(r, w.w, rng);
        CHECK(ours <= oracle + 1e-6);
        CHECK(ours == doctest::Approx(oracle).epsilon(1e-5));
      }
    }
  }

  SUBCASE("fewer than two usable bands is an error") {
    const IdealFsGcc ideal = ideal_fsgcc(0, win);
    BandWeights w;
    w.w = Eigen::VectorXd::Zero(ideal.matrix.L);
    w.w[0] = 1.0;
    CHECK_THROWS_WITH_AS(wsvd_rank1_extract(ideal.matrix, w),
                         "insufficient reliable bands", std::runtime_error);
  }

  SUBCASE("weight length must match the band count") {
    const IdealFsGcc ideal = ideal_fsgcc(0, win);
    BandWeights w;
    w.w = Eigen::VectorXd::Ones(ideal.matrix.L + 1);
    CHECK_THROWS_AS(wsvd_rank1_extract(ideal.matrix, w), std::invalid_argument);
  }
}

TEST_CASE("recover_gcc") {
  const int n = 512;
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 64, 32, n);

  SUBCASE("ideal factors recover the true delay with a positive peak") {
    for (int tau0 : {40, -200, 0, 255}) {
      const IdealFsGcc ideal = ideal_fsgcc(tau0, win);
      const RecoveredGcc rec = recover_gcc(svd_rank1_extract(ideal.matrix));
      CHECK(rec.tau_hat == tau0);
      CHECK(rec.phi0_hat[lag_to_index(rec.tau_hat, n)] > 0.0);
    }
  }

  SUBCASE("sign flip of the factor does not change the output") {
    const IdealFsGcc ideal = ideal_fsgcc(40, win);
    RankOneFactors f = svd_rank1_extract(ideal.matrix);
    const RecoveredGcc rec1 = recover_gcc(f);
    f.a1 = -f.a1;
    const RecoveredGcc rec2 = recover_gcc(f);
    CHECK((rec1.phi0_hat - rec2.phi0_hat).cwiseAbs().maxCoeff() == 0.0);
    CHECK(rec1.tau_hat == rec2.tau_hat);
    CHECK(rec1.gamma == rec2.gamma);
  }

  SUBCASE("an arbitrary unit phasor on the factor is absorbed") {
    const IdealFsGcc ideal = ideal_fsgcc(-77, win);
    RankOneFactors f = svd_rank1_extract(ideal.matrix);
    const RecoveredGcc rec1 = recover_gcc(f);
    f.a1 *= std::polar(1.0, 1.234);
    const RecoveredGcc rec2 = recover_gcc(f);
    CHECK((rec1.phi0_hat - rec2.phi0_hat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rec1.tau_hat == rec2.tau_hat);
  }

  SUBCASE("noisy matrices with weighted extraction still peak at tau0") {
    const IdealFsGcc ideal = ideal_fsgcc(92, make_spectral_window(WindowKind::hann, 128, 32, 2048));
    Eigen::VectorXd alphas = Eigen::VectorXd::Zero(ideal.matrix.L);
    alphas.head(ideal.matrix.L / 2).setOnes();  // upper half pure noise
    int hits = 0;
    for (int s = 0; s < 10; ++s) {
      const auto [noisy, model] = synthesize_noisy_fsgcc(ideal, alphas, 40 + s);
      const BandWeights w = estimate_band_weights(noisy);
      const RecoveredGcc rec = recover_gcc(wsvd_rank1_extract(noisy, w));
      if (rec.tau_hat == 92) ++hits;
    }
    CHECK(hits == 10);
  }
}

TEST_CASE("eigen-structure of binary mixtures") {
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 128, 32, 2048);
  const IdealFsGcc ideal = ideal_fsgcc(92, win);
  const int L = ideal.matrix.L;
  for (int lg : {L, L - 2, L / 2}) {
    Eigen::VectorXd alphas = Eigen::VectorXd::Zero(L);
    alphas.head(lg).setOnes();
    double min_cosine = 1.0;
    for (int s = 0; s < 10; ++s) {
      const auto [noisy, model] = synthesize_noisy_fsgcc(ideal, alphas, 7000 + s);
      const RankOneFactors f = svd_rank1_extract(noisy);
      const Eigen::VectorXcd u1 = f.a1 / f.sigmas[0];
      const double cosine = std::abs(u1.dot(ideal.phi0.cast<std::complex<double>>())) /
                            ideal.phi0.norm();
      min_cosine = std::min(min_cosine, cosine);
    }
    if (lg >= L / 2) CHECK(min_cosine >= 0.999);
  }
}

TEST_CASE("low_rank_approx") {
  Rng rng(55);
  const SpectralWindow win = make_spectral_window(WindowKind::hann, 32, 16, 256);
  const Eigen::MatrixXcd r = oracles::random_complex_matrix(24, 6, rng);
  const FsGccMatrix mat = wrap_matrix(r, win);

  const Eigen::MatrixXcd r1 = low_rank_approx(mat, 1);
  const RankOneFactors f = svd_rank1_extract(mat);
  CHECK((r1 - target_component(f)).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::MatrixXcd full = low_rank_approx(mat, 6);
  CHECK((full - r).cwiseAbs().maxCoeff() < 1e-9);

  const double res1 = (r - low_rank_approx(mat, 1)).norm();
  const double res2 = (r - low_rank_approx(mat, 2)).norm();
  CHECK(res2 <= res1);
}
