#pragma once

#include <Eigen/Dense>
#include <optional>

#include "fsgcc/fsgcc.hpp"

namespace fsgcc {

/// Per-sub-band confidence weights in [0, 1].
struct BandWeights {
  Eigen::VectorXd w;

  int size() const { return static_cast<int>(w.size()); }
};

enum class LowRankMethod { svd, wsvd };

/// Dominant rank-one factorization of an FS-GCC matrix. The target
/// component is a1 * b1^H; sigmas holds the full non-increasing singular
/// spectrum of the decomposed matrix (the weighted matrix for wsvd).
struct RankOneFactors {
  Eigen::VectorXcd a1;
  Eigen::VectorXcd b1;
  Eigen::VectorXd sigmas;
  LowRankMethod method = LowRankMethod::svd;
};

/// Denoised GCC recovered from the dominant left factor.
struct RecoveredGcc {
  Eigen::VectorXd phi0_hat;  // lag-ordered
  int gamma = 0;             // raw index of max |Re| (after phase fixing)
  int tau_hat = 0;           // lag of the positive peak
  std::optional<double> fspr_db;
};

/// Confidence weights from the per-column mean magnitudes, calibrated
/// between the perfect-band mean and the Rayleigh noise-band mean.
BandWeights estimate_band_weights(const FsGccMatrix& mat);

/// Dominant singular triple of the matrix: a1 = sigma1 * u1, b1 = v1.
RankOneFactors svd_rank1_extract(const FsGccMatrix& mat);

/// Weighted rank-one extraction: decompose R * diag(w) and undo the
/// column weighting on the right factor. Weights below 1e-3 are floored
/// only for that inversion; a1 never passes through it.
RankOneFactors wsvd_rank1_extract(const FsGccMatrix& mat, const BandWeights& w);

/// Real lag-domain GCC from the dominant left factor, with the singular
/// vector phase/sign ambiguity resolved toward a positive peak.
RecoveredGcc recover_gcc(const RankOneFactors& f);

/// Target rank-one matrix a1 * b1^H.
Eigen::MatrixXcd target_component(const RankOneFactors& f);

/// Best rank-r approximation in Frobenius norm (unweighted). Exposed for
/// experimentation; the recovery pipeline always uses r = 1.
Eigen::MatrixXcd low_rank_approx(const FsGccMatrix& mat, int r = 1);

/// Weight floor used when inverting the column weighting.
inline constexpr double kWeightFloor = 1e-3;

}  // namespace fsgcc
