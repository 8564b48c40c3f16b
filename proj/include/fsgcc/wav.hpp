#pragma once

#include <Eigen/Dense>
#include <string>

namespace fsgcc {

struct WavData {
  Eigen::VectorXd samples;
  double fs = 0.0;
};

/// Read a mono WAV file (PCM16 or IEEE float32). Throws on I/O or format
/// problems; multi-channel input is rejected.
WavData read_wav(const std::string& path);

/// Write a mono float32 WAV file.
void write_wav_float32(const std::string& path, const Eigen::VectorXd& samples, double fs);

}  // namespace fsgcc
