#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fsgcc {

struct TestSignalSpec {
  enum class Kind { white, bandlimited, speechlike, wav };
  Kind kind = Kind::white;
  std::vector<std::pair<double, double>> bands;  // normalized to fs, within [0, 0.5]
  int ar_order = 12;
  double burst_rate = 4.0;  // bursts per second (speechlike)
  std::string wav_path;
  double duration_s = 2.0;
  uint64_t seed = 0;
};

struct SimScene {
  Eigen::Vector3d room_dims{6.0, 7.0, 3.0};
  double refl = 0.0;  // uniform wall reflection coefficient, in [0, 1)
  Eigen::Vector3d source_pos{2.0, 3.0, 1.25};
  std::vector<Eigen::Vector3d> mic_positions;
  double c = 343.0;
  double fs = 44100.0;
  int max_order = 0;
  double snr_db = std::numeric_limits<double>::infinity();  // +inf = noiseless
  TestSignalSpec signal;
  uint64_t seed = 0;
};

struct Rir {
  Eigen::VectorXd taps;
  double fs = 0.0;
  double direct_delay_samples = 0.0;
};

/// Round to nearest, ties to even. Symmetric under negation.
double round_half_even(double x);

void validate_scene(const SimScene& scene);

/// TDOA between two mics in samples, rounded half-to-even.
int true_tdoa(const SimScene& scene, int mic_i, int mic_j);

/// Image-source room impulse response. Each arrival is placed with an
/// 81-tap Hann-windowed sinc kernel normalized to unit energy, so
/// sub-sample geometry survives without quantizing delays.
Rir image_source_rir(const SimScene& scene, int mic_index);

/// Deterministic test signal, RMS-normalized (except wav input).
Eigen::VectorXd gen_test_signal(const TestSignalSpec& spec, double fs);

struct PairSignals {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  int tau_true = 0;
};

/// Source * RIR per mic plus independent per-channel noise scaled to the
/// scene SNR (measured against each channel's own convolved signal power).
std::vector<Eigen::VectorXd> synthesize_array(const SimScene& scene);

/// Two-mic convenience wrapper; requires exactly two mics.
PairSignals synthesize_pair(const SimScene& scene);

/// Linear convolution via FFT.
Eigen::VectorXd convolve(const Eigen::VectorXd& x, const Eigen::VectorXd& h);

/// Reverberation time from the Schroeder energy decay curve, fitted over
/// the -5 ... -25 dB span and extrapolated to -60 dB. Seconds.
double measured_t60(const Rir& rir);

/// Indices of frames whose energy is within threshold_db of the median
/// frame energy of the reference signal.
std::vector<int> active_frames(const Eigen::VectorXd& reference, int N, int hop,
                               double threshold_db = -40.0);

}  // namespace fsgcc
