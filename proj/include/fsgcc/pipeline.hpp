#pragma once

#include <optional>

#include "fsgcc/lowrank.hpp"
#include "fsgcc/spectral.hpp"
#include "fsgcc/tde.hpp"

namespace fsgcc {

/// Analysis parameters shared by the CLI commands and benchmarks.
struct AnalysisConfig {
  int N = 2048;
  int hop = 512;
  int B = 128;
  int M = 32;
  WindowKind window_kind = WindowKind::hann;
  Taper taper = Taper::hann;
  double eps_floor = -1.0;  // negative = per-frame default
  bool refine = false;
};

struct FrameOutcome {
  TdoaEstimate estimate;
  Eigen::VectorXd gcc;  // the lag-domain function the estimate came from
  std::optional<BandWeights> weights;
  bool no_reliable_bands = false;  // fs_wsvd found fewer than 2 usable bands
};

/// Run one frame pair through the selected estimator. The window argument
/// must match the config (prebuilt once per run to avoid rebuilding it per
/// frame).
FrameOutcome process_frame_pair(const FramePair& pair, const SpectralWindow& win,
                                const AnalysisConfig& config, TdeMethod method);

/// Exclusion half-width used when ranking the second GCC peak: half the
/// window main lobe for sub-band methods, one lag for the conventional GCC
/// (whose ideal peak is a single sample).
double fspr_exclusion_halfwidth(const SpectralWindow& win, TdeMethod method);

}  // namespace fsgcc
