#include "fsgcc/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsgcc {

std::vector<Eigen::VectorXd> frame_signal(const Eigen::VectorXd& x, int N, int hop,
                                          Taper taper) {
  if (N <= 0 || N % 2 != 0) throw std::invalid_argument("frame length must be even and positive");
  if (hop <= 0 || hop > N) throw std::invalid_argument("hop must satisfy 0 < hop <= N");
  if (x.size() < N) throw std::invalid_argument("signal too short");

  Eigen::VectorXd w(N);
  if (taper == Taper::hann) {
    for (int n = 0; n < N; ++n)
      w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / N));
  } else {
    w.setOnes();
  }

  const int count = static_cast<int>((x.size() - N) / hop) + 1;
  std::vector<Eigen::VectorXd> frames;
  frames.reserve(count);
  for (int i = 0; i < count; ++i)
    frames.push_back(x.segment(static_cast<Eigen::Index>(i) * hop, N).cwiseProduct(w));
  return frames;
}

FramePair make_frame_pair(const Eigen::VectorXd& frame1, const Eigen::VectorXd& frame2,
                          double fs, int frame_index) {
  if (frame1.size() != frame2.size()) throw std::invalid_argument("frame length mismatch");
  FramePair pair;
  pair.N = static_cast<int>(frame1.size());
  pair.fs = fs;
  pair.frame_index = frame_index;
  pair.X1 = dft(frame1);
  pair.X2 = dft(frame2);
  return pair;
}

double default_phat_floor(const FramePair& pair) {
  const int n = pair.N;
  // Parseval: mean square of the time frame = sum|X|^2 / N^2
  const double ms1 = pair.X1.squaredNorm() / (static_cast<double>(n) * n);
  const double ms2 = pair.X2.squaredNorm() / (static_cast<double>(n) * n);
  return 1e-12 * std::sqrt(ms1 * ms2);
}

PhatSpectrum phat_cross_spectrum(const FramePair& pair, double eps_floor) {
  if (pair.X1.size() != pair.X2.size())
    throw std::invalid_argument("spectrum length mismatch");
  if (eps_floor < 0.0) throw std::invalid_argument("eps_floor must be non-negative");

  const int n = static_cast<int>(pair.X1.size());
  PhatSpectrum out;
  out.eps_floor = eps_floor;
  out.psi.resize(n);
  for (int k = 0; k < n; ++k) {
    const std::complex<double> cross = pair.X1[k] * std::conj(pair.X2[k]);
    const double mag = std::abs(cross);
    if (mag > eps_floor) {
      out.psi[k] = cross / mag;
    } else {
      out.psi[k] = 0.0;
      out.floored_bins.push_back(k);
    }
  }
  return out;
}

int argmax_lag(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (values[i] > values[best]) best = i;  // strict: first max wins = smallest lag
  return index_to_lag(best, n);
}

Gcc conventional_gcc(const PhatSpectrum& psi) {
  const int n = psi.size();
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("spectrum length must be even");

  const Eigen::VectorXcd r = idft(psi.psi);
  const double imag_residue = r.imag().cwiseAbs().maxCoeff();
  if (imag_residue > 1e-6) throw std::runtime_error("non-Hermitian spectrum");

  Gcc out;
  out.values = to_lag_order(Eigen::VectorXd(r.real()));
  out.peak_lag = argmax_lag(out.values);
  out.peak_value = out.values[lag_to_index(out.peak_lag, n)];
  return out;
}

SpectralWindow make_spectral_window(WindowKind kind, int B, int M, int N) {
  if (N <= 0 || N % 2 != 0) throw std::invalid_argument("N must be even and positive");
  if (B <= 0 || B % 2 != 0 || B >= N)
    throw std::invalid_argument("window support B must be even, positive and < N");
  if (M <= 0 || M > B) throw std::invalid_argument("hop M must satisfy 0 < M <= B");

  SpectralWindow win;
  win.kind = kind;
  win.B = B;
  win.M = M;
  win.N = N;
  win.phi_freq = Eigen::VectorXd::Zero(N);

  const int half = B / 2;
  for (int kp = -half; kp <= half; ++kp) {
    const int bin = (kp + N) % N;
    if (kind == WindowKind::hann) {
      win.phi_freq[bin] = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * kp / B));
    } else {
      // Half-amplitude edge bins keep the window even under k -> N-k and
      // make hop M = B overlap-add to a constant.
      win.phi_freq[bin] = (std::abs(kp) == half) ? 0.5 : 1.0;
    }
  }

  const Eigen::VectorXcd lag = idft(win.phi_freq.cast<std::complex<double>>().eval());
  win.phi_lag = to_lag_order(Eigen::VectorXd(lag.real()));
  return win;
}

double main_lobe_width(const SpectralWindow& win) {
  const double ratio = static_cast<double>(win.N) / win.B;
  return win.kind == WindowKind::rectangular ? 2.0 * ratio : 4.0 * ratio;
}

double window_norm_sq(const SpectralWindow& win) { return win.phi_lag.squaredNorm(); }

}  // namespace fsgcc
