#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace fsgcc {

/// Deterministic random stream. Gaussian variates go through an explicit
/// Box-Muller transform so that sequences are reproducible bit-for-bit
/// across standard libraries (std::normal_distribution is not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), eng_(mix(seed)) {}

  /// Derive an independent child stream; deterministic in (seed, stream).
  Rng split(uint64_t stream) const {
    return Rng(mix(seed_ ^ mix(stream + 0x517cc1b727220a95ULL)));
  }

  uint64_t seed() const { return seed_; }

  double uniform() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(eng_() % static_cast<uint64_t>(hi - lo + 1));
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Circularly-symmetric complex Gaussian, unit variance per complex sample.
  std::complex<double> cgaussian() {
    const double s = 1.0 / std::sqrt(2.0);
    const double re = gaussian();
    const double im = gaussian();
    return {re * s, im * s};
  }

 private:
  static uint64_t mix(uint64_t z) {
    // splitmix64 finalizer; decorrelates nearby seeds
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fsgcc
