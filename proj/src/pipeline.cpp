#include "fsgcc/pipeline.hpp"

#include <stdexcept>

#include "fsgcc/fsgcc.hpp"

namespace fsgcc {

double fspr_exclusion_halfwidth(const SpectralWindow& win, TdeMethod method) {
  return method == TdeMethod::gcc ? 1.0 : main_lobe_width(win) / 2.0;
}

FrameOutcome process_frame_pair(const FramePair& pair, const SpectralWindow& win,
                                const AnalysisConfig& config, TdeMethod method) {
  const double floor =
      config.eps_floor >= 0.0 ? config.eps_floor : default_phat_floor(pair);
  const PhatSpectrum psi = phat_cross_spectrum(pair, floor);

  FrameOutcome outcome;
  if (method == TdeMethod::gcc) {
    const Gcc gcc = conventional_gcc(psi);
    outcome.gcc = gcc.values;
  } else {
    const FsGccMatrix mat = build_fsgcc_matrix(psi, win);
    RankOneFactors factors;
    if (method == TdeMethod::fs_svd) {
      factors = svd_rank1_extract(mat);
    } else {
      BandWeights weights = estimate_band_weights(mat);
      outcome.weights = weights;
      try {
        factors = wsvd_rank1_extract(mat, weights);
      } catch (const std::runtime_error&) {
        outcome.no_reliable_bands = true;
        outcome.estimate.method = method;
        return outcome;
      }
    }
    outcome.gcc = recover_gcc(factors).phi0_hat;
  }

  outcome.estimate = estimate_tdoa(outcome.gcc, config.refine);
  outcome.estimate.method = method;
  outcome.estimate.fspr_db =
      fspr(outcome.gcc, outcome.estimate.tau_hat, fspr_exclusion_halfwidth(win, method));
  return outcome;
}

}  // namespace fsgcc
