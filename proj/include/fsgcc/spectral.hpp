#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "fsgcc/fft.hpp"

namespace fsgcc {

enum class WindowKind { hann, rectangular };
enum class Taper { hann, rect };

/// DFT coefficients of one pair of sensor frames.
struct FramePair {
  Eigen::VectorXcd X1;
  Eigen::VectorXcd X2;
  int N = 0;
  double fs = 0.0;
  int frame_index = 0;
};

/// Phase-transform cross-power spectrum. Bins whose cross-power magnitude
/// fell at or below eps_floor are zeroed (they carry no phase information)
/// and listed in floored_bins.
struct PhatSpectrum {
  Eigen::VectorXcd psi;
  double eps_floor = 0.0;
  std::vector<int> floored_bins;

  int size() const { return static_cast<int>(psi.size()); }
};

/// Discrete frequency-domain analysis window and its lag response.
///
/// phi_freq is centered at bin 0 with wrap-around support in the B-bin
/// interval {-B/2, ..., B/2}; phi_lag is its inverse DFT in lag order
/// (entry 0 <-> lag -N/2). Both windows are exactly even under k -> N-k:
/// Hann is zero at the support edges; the rectangular window takes the
/// value 1/2 at the two edge bins so that hopping by M = B still overlaps
/// to a constant.
struct SpectralWindow {
  WindowKind kind = WindowKind::hann;
  int B = 0;  // support in bins, even, < N
  int M = 0;  // hop in bins, 0 < M <= B
  int N = 0;
  Eigen::VectorXd phi_freq;
  Eigen::VectorXd phi_lag;
};

/// Real generalized cross-correlation over lags -N/2 ... N/2-1.
struct Gcc {
  Eigen::VectorXd values;  // lag-ordered
  int peak_lag = 0;
  double peak_value = 0.0;

  int size() const { return static_cast<int>(values.size()); }
};

/// Slice a signal into overlapping tapered frames. Frame i covers samples
/// [i*hop, i*hop + N); the count is floor((len-N)/hop) + 1.
std::vector<Eigen::VectorXd> frame_signal(const Eigen::VectorXd& x, int N, int hop,
                                          Taper taper);

/// FFT a pair of tapered time frames into a FramePair.
FramePair make_frame_pair(const Eigen::VectorXd& frame1, const Eigen::VectorXd& frame2,
                          double fs, int frame_index);

/// Magnitude floor used by phat_cross_spectrum when none is given:
/// 1e-12 x the geometric mean of the two frames' mean-square values.
double default_phat_floor(const FramePair& pair);

PhatSpectrum phat_cross_spectrum(const FramePair& pair, double eps_floor);

inline PhatSpectrum phat_cross_spectrum(const FramePair& pair) {
  return phat_cross_spectrum(pair, default_phat_floor(pair));
}

/// Inverse transform of the PHAT spectrum, lag-ordered, with argmax peak
/// (ties broken toward the smallest lag). Throws "non-Hermitian spectrum"
/// if the imaginary residue exceeds 1e-6 in max-abs.
Gcc conventional_gcc(const PhatSpectrum& psi);

SpectralWindow make_spectral_window(WindowKind kind, int B, int M, int N);

/// Main-lobe width of the window's lag response, in lags:
/// 2N/B for rectangular, 4N/B for Hann.
double main_lobe_width(const SpectralWindow& win);

/// ||phi||^2 of the lag response.
double window_norm_sq(const SpectralWindow& win);

/// Argmax over a lag-ordered vector; ties broken toward the smallest lag.
/// Returns the lag (not the raw index).
int argmax_lag(const Eigen::VectorXd& values);

}  // namespace fsgcc
