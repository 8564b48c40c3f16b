#include "fsgcc/lowrank.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsgcc {

namespace {

using ThinSvd = Eigen::JacobiSVD<Eigen::MatrixXcd>;

ThinSvd decompose(const Eigen::MatrixXcd& m) {
  ThinSvd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()[0] <= 0.0) throw std::runtime_error("empty spectrum");
  return svd;
}

}  // namespace

BandWeights estimate_band_weights(const FsGccMatrix& mat) {
  const int n = mat.rows();
  const SpectralWindow& win = mat.window;

  const double perfect_mean = win.phi_lag.cwiseAbs().mean();
  const double noise_mean =
      std::sqrt(window_norm_sq(win) / (2.0 * n)) * std::sqrt(std::numbers::pi / 2.0);
  const double denom = noise_mean - perfect_mean;
  if (std::abs(denom) <= 1e-15 * noise_mean)
    throw std::runtime_error("degenerate window: noise and perfect band means coincide");

  BandWeights out;
  out.w.resize(mat.L);
  for (int l = 0; l < mat.L; ++l) {
    const double col_mean = mat.R.col(l).cwiseAbs().mean();
    const double g = (noise_mean - col_mean) / denom;
    out.w[l] = std::clamp(g, 0.0, 1.0);
  }
  return out;
}

RankOneFactors svd_rank1_extract(const FsGccMatrix& mat) {
  if (mat.L < 2) throw std::invalid_argument("need at least 2 sub-bands");
  const ThinSvd svd = decompose(mat.R);

  RankOneFactors f;
  f.method = LowRankMethod::svd;
  f.sigmas = svd.singularValues();
  f.a1 = svd.singularValues()[0] * svd.matrixU().col(0);
  f.b1 = svd.matrixV().col(0);
  return f;
}

RankOneFactors wsvd_rank1_extract(const FsGccMatrix& mat, const BandWeights& w) {
  if (mat.L < 2) throw std::invalid_argument("need at least 2 sub-bands");
  if (w.size() != mat.L) throw std::invalid_argument("weight length must equal L");
  if ((w.w.array() < 0.0).any() || (w.w.array() > 1.0).any())
    throw std::invalid_argument("weights must lie in [0, 1]");

  int usable = 0;
  for (int l = 0; l < mat.L; ++l)
    if (w.w[l] > kWeightFloor) ++usable;
  if (usable < 2) throw std::runtime_error("insufficient reliable bands");

  const Eigen::MatrixXcd weighted = mat.R * w.w.asDiagonal();
  const ThinSvd svd = decompose(weighted);

  const double sigma1 = svd.singularValues()[0];
  const double root = std::sqrt(sigma1);

  RankOneFactors f;
  f.method = LowRankMethod::wsvd;
  f.sigmas = svd.singularValues();
  f.a1 = root * svd.matrixU().col(0);
  f.b1.resize(mat.L);
  for (int l = 0; l < mat.L; ++l)
    f.b1[l] = root * svd.matrixV()(l, 0) / std::max(w.w[l], kWeightFloor);
  return f;
}

RecoveredGcc recover_gcc(const RankOneFactors& f) {
  const int n = static_cast<int>(f.a1.size());

  // Complex factors carry an arbitrary unit phasor; rotate so the largest
  // entry lands on the real axis before taking the real part.
  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(f.a1[i]) > std::abs(f.a1[peak])) peak = i;
  const double peak_mag = std::abs(f.a1[peak]);
  if (peak_mag <= 0.0) throw std::runtime_error("empty spectrum");
  const std::complex<double> rotation = std::conj(f.a1[peak]) / peak_mag;

  Eigen::VectorXd real_part(n);
  for (int i = 0; i < n; ++i) real_part[i] = (f.a1[i] * rotation).real();

  int gamma = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(real_part[i]) > std::abs(real_part[gamma])) gamma = i;

  RecoveredGcc out;
  out.gamma = gamma;
  out.phi0_hat = real_part[gamma] >= 0.0 ? real_part : Eigen::VectorXd(-real_part);
  out.tau_hat = argmax_lag(out.phi0_hat);
  return out;
}

Eigen::MatrixXcd target_component(const RankOneFactors& f) {
  return f.a1 * f.b1.adjoint();
}

Eigen::MatrixXcd low_rank_approx(const FsGccMatrix& mat, int r) {
  if (r < 1 || r > mat.L) throw std::invalid_argument("rank out of range");
  const ThinSvd svd = decompose(mat.R);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(mat.rows(), mat.L);
  for (int i = 0; i < r; ++i)
    out += svd.singularValues()[i] * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
  return out;
}

}  // namespace fsgcc
