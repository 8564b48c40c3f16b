#include "fsgcc/roomsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsgcc/fft.hpp"
#include "fsgcc/rng.hpp"
#include "fsgcc/wav.hpp"

namespace fsgcc {

namespace {
constexpr int kKernelHalf = 40;  // 81-tap fractional-delay kernel

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

void add_arrival(Eigen::VectorXd& taps, double delay, double amplitude) {
  const int lo = std::max(0, static_cast<int>(std::ceil(delay)) - kKernelHalf);
  const int hi = std::min(static_cast<int>(taps.size()) - 1,
                          static_cast<int>(std::floor(delay)) + kKernelHalf);
  if (lo > hi) return;

  Eigen::VectorXd kernel(hi - lo + 1);
  for (int t = lo; t <= hi; ++t) {
    const double r = t - delay;
    const double w = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * r / (2 * kKernelHalf + 1)));
    kernel[t - lo] = sinc(r) * w;
  }
  const double norm = kernel.norm();
  if (norm == 0.0) return;
  taps.segment(lo, kernel.size()) += (amplitude / norm) * kernel;
}

bool inside_room(const Eigen::Vector3d& p, const Eigen::Vector3d& dims) {
  for (int d = 0; d < 3; ++d)
    if (p[d] <= 0.0 || p[d] >= dims[d]) return false;
  return true;
}

}  // namespace

double round_half_even(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac < 0.5) return f;
  if (frac > 0.5) return f + 1.0;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

void validate_scene(const SimScene& scene) {
  for (int d = 0; d < 3; ++d)
    if (scene.room_dims[d] <= 0.0) throw std::invalid_argument("non-positive room dimension");
  if (scene.refl < 0.0 || scene.refl >= 1.0)
    throw std::invalid_argument("reflection coefficient must lie in [0, 1)");
  if (!inside_room(scene.source_pos, scene.room_dims))
    throw std::invalid_argument("source outside room");
  if (scene.mic_positions.size() < 2) throw std::invalid_argument("need at least 2 mics");
  for (const auto& m : scene.mic_positions)
    if (!inside_room(m, scene.room_dims)) throw std::invalid_argument("mic outside room");
  if (scene.fs <= 0.0 || scene.c <= 0.0) throw std::invalid_argument("fs and c must be positive");
  if (scene.max_order < 0) throw std::invalid_argument("max_order must be non-negative");
  if (scene.signal.duration_s <= 0.0 && scene.signal.kind != TestSignalSpec::Kind::wav)
    throw std::invalid_argument("signal duration must be positive");
  for (const auto& [lo, hi] : scene.signal.bands)
    if (lo < 0.0 || hi > 0.5 || lo >= hi)
      throw std::invalid_argument("bands must be increasing intervals within [0, 0.5]");
}

int true_tdoa(const SimScene& scene, int mic_i, int mic_j) {
  const auto& mics = scene.mic_positions;
  if (mic_i < 0 || mic_j < 0 || mic_i >= static_cast<int>(mics.size()) ||
      mic_j >= static_cast<int>(mics.size()))
    throw std::out_of_range("mic index out of range");
  const double di = (scene.source_pos - mics[mic_i]).norm();
  const double dj = (scene.source_pos - mics[mic_j]).norm();
  return static_cast<int>(round_half_even((di - dj) / scene.c * scene.fs));
}

Rir image_source_rir(const SimScene& scene, int mic_index) {
  if (mic_index < 0 || mic_index >= static_cast<int>(scene.mic_positions.size()))
    throw std::out_of_range("mic index out of range");
  const Eigen::Vector3d mic = scene.mic_positions[mic_index];
  const double direct_dist = (scene.source_pos - mic).norm();
  if (direct_dist < 1e-9) throw std::invalid_argument("source coincident with mic");

  // Image positions per axis: (1-2q)s + 2jL with q in {0,1}; the path hits
  // |j-q| + |j| walls along that axis.
  struct AxisImage {
    double coord;
    int reflections;
  };
  std::array<std::vector<AxisImage>, 3> axis_images;
  const int jmax = scene.max_order / 2 + 1;
  for (int d = 0; d < 3; ++d) {
    for (int q = 0; q <= 1; ++q) {
      for (int j = -jmax; j <= jmax; ++j) {
        const int refl = std::abs(j - q) + std::abs(j);
        if (refl > scene.max_order) continue;
        axis_images[d].push_back(
            {(1 - 2 * q) * scene.source_pos[d] + 2.0 * j * scene.room_dims[d], refl});
      }
    }
  }

  struct Arrival {
    double delay;
    double amplitude;
  };
  std::vector<Arrival> arrivals;
  double max_delay = 0.0;
  for (const auto& ix : axis_images[0]) {
    for (const auto& iy : axis_images[1]) {
      for (const auto& iz : axis_images[2]) {
        const int total = ix.reflections + iy.reflections + iz.reflections;
        if (total > scene.max_order) continue;
        const Eigen::Vector3d img(ix.coord, iy.coord, iz.coord);
        const double dist = (img - mic).norm();
        const double delay = dist / scene.c * scene.fs;
        const double amplitude =
            std::pow(scene.refl, total) / (4.0 * std::numbers::pi * dist);
        if (amplitude == 0.0) continue;
        arrivals.push_back({delay, amplitude});
        max_delay = std::max(max_delay, delay);
      }
    }
  }

  Rir rir;
  rir.fs = scene.fs;
  rir.direct_delay_samples = direct_dist / scene.c * scene.fs;
  rir.taps = Eigen::VectorXd::Zero(static_cast<int>(std::ceil(max_delay)) + kKernelHalf + 2);
  for (const auto& a : arrivals) add_arrival(rir.taps, a.delay, a.amplitude);
  return rir;
}

namespace {

Eigen::VectorXd white_noise(int len, Rng& rng) {
  Eigen::VectorXd x(len);
  for (int i = 0; i < len; ++i) x[i] = rng.gaussian();
  return x;
}

void normalize_rms(Eigen::VectorXd& x) {
  const double rms = std::sqrt(x.squaredNorm() / x.size());
  if (rms > 0.0) x /= rms;
}

Eigen::VectorXd bandlimited_noise(int len, const std::vector<std::pair<double, double>>& bands,
                                  Rng& rng) {
  Eigen::VectorXcd spec = dft(white_noise(len, rng));
  for (int k = 0; k <= len / 2; ++k) {
    const double f = static_cast<double>(k) / len;
    bool keep = false;
    for (const auto& [lo, hi] : bands)
      if (f >= lo && f <= hi) {
        keep = true;
        break;
      }
    if (!keep) {
      spec[k] = 0.0;
      if (k > 0 && k < len / 2) spec[len - k] = 0.0;
    }
  }
  Eigen::VectorXd x = idft(spec).real();
  normalize_rms(x);
  return x;
}

// Noise bursts through a cascade of random resonators: a crude stand-in for
// speech with time-varying envelope and a handful of formant-like peaks.
Eigen::VectorXd speechlike_signal(int len, double fs, int ar_order, double burst_rate,
                                  Rng& rng) {
  Eigen::VectorXd envelope = Eigen::VectorXd::Constant(len, 0.05);
  const int n_bursts = std::max(1, static_cast<int>(burst_rate * len / fs));
  for (int b = 0; b < n_bursts; ++b) {
    const int center = rng.uniform_int(0, len - 1);
    const int half = static_cast<int>(fs * rng.uniform(0.04, 0.15));
    const double amp = rng.uniform(0.5, 1.5);
    for (int t = std::max(0, center - half); t < std::min(len, center + half); ++t) {
      const double phase = std::numbers::pi * (t - center) / half;
      envelope[t] += amp * 0.5 * (1.0 + std::cos(phase));
    }
  }

  Eigen::VectorXd x = white_noise(len, rng).cwiseProduct(envelope);

  // AR polynomial from conjugate pole pairs at formant-ish frequencies.
  std::vector<double> poly{1.0};
  const int pairs = std::max(1, ar_order / 2);
  const double f_hi = std::min(4000.0, 0.4 * fs);
  for (int p = 0; p < pairs; ++p) {
    const double f0 = 120.0 * std::pow(f_hi / 120.0, rng.uniform());
    const double radius = rng.uniform(0.92, 0.98);
    const double theta = 2.0 * std::numbers::pi * f0 / fs;
    const double c1 = -2.0 * radius * std::cos(theta);
    const double c2 = radius * radius;
    std::vector<double> next(poly.size() + 2, 0.0);
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i] * c1;
      next[i + 2] += poly[i] * c2;
    }
    poly = std::move(next);
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(len);
  for (int t = 0; t < len; ++t) {
    double acc = x[t];
    for (size_t k = 1; k < poly.size(); ++k)
      if (t >= static_cast<int>(k)) acc -= poly[k] * y[t - k];
    y[t] = acc;
  }
  normalize_rms(y);
  return y;
}

}  // namespace

Eigen::VectorXd gen_test_signal(const TestSignalSpec& spec, double fs) {
  Rng rng(spec.seed);
  const int len = static_cast<int>(std::llround(spec.duration_s * fs));

  switch (spec.kind) {
    case TestSignalSpec::Kind::white: {
      Eigen::VectorXd x = white_noise(len, rng);
      normalize_rms(x);
      return x;
    }
    case TestSignalSpec::Kind::bandlimited: {
      if (spec.bands.empty()) throw std::invalid_argument("bandlimited signal needs bands");
      return bandlimited_noise(len, spec.bands, rng);
    }
    case TestSignalSpec::Kind::speechlike:
      return speechlike_signal(len, fs, spec.ar_order, spec.burst_rate, rng);
    case TestSignalSpec::Kind::wav: {
      WavData wav = read_wav(spec.wav_path);
      if (std::abs(wav.fs - fs) > 0.5)
        throw std::invalid_argument("wav sample rate does not match scene fs");
      Eigen::VectorXd x = wav.samples;
      if (spec.duration_s > 0.0 && x.size() > len) x = x.head(len).eval();
      return x;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Eigen::VectorXd> synthesize_array(const SimScene& scene) {
  validate_scene(scene);
  const Eigen::VectorXd source = gen_test_signal(scene.signal, scene.fs);

  std::vector<Eigen::VectorXd> convolved;
  Eigen::Index max_len = 0;
  for (int m = 0; m < static_cast<int>(scene.mic_positions.size()); ++m) {
    const Rir rir = image_source_rir(scene, m);
    convolved.push_back(convolve(source, rir.taps));
    max_len = std::max(max_len, convolved.back().size());
  }

  Rng root(scene.seed);
  std::vector<Eigen::VectorXd> out;
  for (size_t m = 0; m < convolved.size(); ++m) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(max_len);
    x.head(convolved[m].size()) = convolved[m];
    if (std::isfinite(scene.snr_db)) {
      Rng rng = root.split(1000 + m);
      Eigen::VectorXd noise = white_noise(static_cast<int>(max_len), rng);
      const double sig_power = x.squaredNorm() / max_len;
      const double noise_power = noise.squaredNorm() / max_len;
      const double target = sig_power / std::pow(10.0, scene.snr_db / 10.0);
      x += noise * std::sqrt(target / noise_power);
    }
    out.push_back(std::move(x));
  }
  return out;
}

PairSignals synthesize_pair(const SimScene& scene) {
  if (scene.mic_positions.size() != 2)
    throw std::invalid_argument("synthesize_pair requires exactly two mics");
  auto chans = synthesize_array(scene);
  return {std::move(chans[0]), std::move(chans[1]), true_tdoa(scene, 0, 1)};
}

Eigen::VectorXd convolve(const Eigen::VectorXd& x, const Eigen::VectorXd& h) {
  const Eigen::Index out_len = x.size() + h.size() - 1;
  Eigen::Index fft_len = 1;
  while (fft_len < out_len) fft_len <<= 1;

  Eigen::VectorXd xp = Eigen::VectorXd::Zero(fft_len);
  Eigen::VectorXd hp = Eigen::VectorXd::Zero(fft_len);
  xp.head(x.size()) = x;
  hp.head(h.size()) = h;
  const Eigen::VectorXcd prod = dft(xp).cwiseProduct(dft(hp));
  return idft(prod).real().head(out_len);
}

double measured_t60(const Rir& rir) {
  const Eigen::Index n = rir.taps.size();
  if (n == 0 || rir.taps.squaredNorm() == 0.0) throw std::invalid_argument("empty RIR");

  Eigen::VectorXd edc(n);
  double acc = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    acc += rir.taps[t] * rir.taps[t];
    edc[t] = acc;
  }
  const double total = edc[0];
  Eigen::Index t5 = -1, t25 = -1;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double db = 10.0 * std::log10(edc[t] / total + 1e-300);
    if (t5 < 0 && db <= -5.0) t5 = t;
    if (db <= -25.0) {
      t25 = t;
      break;
    }
  }
  if (t5 < 0 || t25 < 0 || t25 <= t5) return 0.0;
  return 3.0 * static_cast<double>(t25 - t5) / rir.fs;  // -20 dB span scaled to -60
}

std::vector<int> active_frames(const Eigen::VectorXd& reference, int N, int hop,
                               double threshold_db) {
  if (reference.size() < N) return {};
  const int count = static_cast<int>((reference.size() - N) / hop) + 1;
  std::vector<double> energies(count);
  for (int i = 0; i < count; ++i)
    energies[i] = reference.segment(static_cast<Eigen::Index>(i) * hop, N).squaredNorm();

  std::vector<double> sorted = energies;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double threshold = median * std::pow(10.0, threshold_db / 10.0);

  std::vector<int> out;
  for (int i = 0; i < count; ++i)
    if (energies[i] > threshold) out.push_back(i);
  return out;
}

}  // namespace fsgcc
