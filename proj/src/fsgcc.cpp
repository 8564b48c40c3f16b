#include "fsgcc/fsgcc.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fsgcc/rng.hpp"

namespace fsgcc {

int num_bands(int N, int B, int M) {
  if (N <= 0 || B <= 0 || M <= 0 || B % 2 != 0 || B >= N || M > B)
    throw std::invalid_argument("invalid window parameters");
  const int L = (N / 2 - B / 2 + M) / M;
  if (L < 1) throw std::invalid_argument("window wider than Nyquist range");
  return L;
}

Eigen::VectorXcd subband_gcc(const PhatSpectrum& psi, const SpectralWindow& win, int l) {
  const int n = psi.size();
  if (n != win.N) throw std::invalid_argument("spectrum/window size mismatch");
  const int L = num_bands(win.N, win.B, win.M);
  if (l < 0 || l >= L) throw std::out_of_range("band index out of range");

  Eigen::VectorXcd windowed(n);
  const int shift = l * win.M;
  for (int k = 0; k < n; ++k)
    windowed[k] = psi.psi[(k + shift) % n] * win.phi_freq[k];
  return to_lag_order(Eigen::VectorXcd(idft(windowed)));
}

FsGccMatrix build_fsgcc_matrix(const PhatSpectrum& psi, const SpectralWindow& win) {
  FsGccMatrix mat;
  mat.window = win;
  mat.L = num_bands(win.N, win.B, win.M);
  mat.R.resize(win.N, mat.L);
  mat.band_center_bins.resize(mat.L);
  for (int l = 0; l < mat.L; ++l) {
    mat.R.col(l) = subband_gcc(psi, win, l);
    mat.band_center_bins[l] = l * win.M;
  }
  return mat;
}

IdealFsGcc ideal_fsgcc(int tau0, const SpectralWindow& win) {
  const int n = win.N;
  if (tau0 < -n / 2 || tau0 >= n / 2)
    throw std::invalid_argument("tau0 outside representable lag range");

  IdealFsGcc ideal;
  ideal.tau0 = tau0;

  ideal.phi0.resize(n);
  for (int i = 0; i < n; ++i)
    ideal.phi0[i] = win.phi_lag[((i - tau0) % n + n) % n];

  const int L = num_bands(win.N, win.B, win.M);
  ideal.e.resize(L);
  for (int l = 0; l < L; ++l) {
    const double arg = 2.0 * std::numbers::pi * l * win.M * tau0 / n;
    ideal.e[l] = std::polar(1.0, arg);
  }

  ideal.matrix.window = win;
  ideal.matrix.L = L;
  ideal.matrix.band_center_bins.resize(L);
  ideal.matrix.R.resize(n, L);
  for (int l = 0; l < L; ++l) {
    ideal.matrix.band_center_bins[l] = l * win.M;
    ideal.matrix.R.col(l) = ideal.phi0 * std::conj(ideal.e[l]);
  }
  return ideal;
}

std::pair<FsGccMatrix, NoisySubbandModel> synthesize_noisy_fsgcc(
    const IdealFsGcc& ideal, const Eigen::VectorXd& alphas, uint64_t rng_seed) {
  const int n = ideal.matrix.rows();
  const int L = ideal.matrix.L;
  if (alphas.size() != L) throw std::invalid_argument("alphas length must equal L");
  if ((alphas.array() < 0.0).any() || (alphas.array() > 1.0).any())
    throw std::invalid_argument("alphas must lie in [0, 1]");

  const SpectralWindow& win = ideal.matrix.window;
  const double phi_norm = std::sqrt(window_norm_sq(win));

  NoisySubbandModel model;
  model.alphas = alphas;
  model.noise_cols.resize(n, L);

  FsGccMatrix out = ideal.matrix;
  Rng root(rng_seed);
  for (int l = 0; l < L; ++l) {
    Rng rng = root.split(static_cast<uint64_t>(l));
    Eigen::VectorXcd spectrum = Eigen::VectorXcd::Zero(n);
    for (int kp = -win.B / 2; kp <= win.B / 2; ++kp) {
      const int bin = (kp + n) % n;
      if (win.phi_freq[bin] != 0.0) spectrum[bin] = win.phi_freq[bin] * rng.cgaussian();
    }
    Eigen::VectorXcd col = to_lag_order(Eigen::VectorXcd(idft(spectrum)));
    const double norm = col.norm();
    if (norm == 0.0) throw std::runtime_error("degenerate noise column");
    col *= phi_norm / norm;
    model.noise_cols.col(l) = col;
    out.R.col(l) = alphas[l] * ideal.matrix.R.col(l) + (1.0 - alphas[l]) * col;
  }
  return {std::move(out), std::move(model)};
}

ColaProfile cola_profile(const SpectralWindow& win, int L) {
  const int n = win.N;
  ColaProfile profile;
  profile.sum = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < L; ++l) {
    const int shift = l * win.M;
    for (int k = 0; k < n; ++k)
      profile.sum[k] += win.phi_freq[((k - shift) % n + n) % n];
  }

  // Interior = the span of band centers; truncation effects live outside it.
  const int interior_hi = (L - 1) * win.M;
  profile.constant = profile.sum[interior_hi / 2];
  double max_dev = 0.0;
  for (int k = 0; k <= interior_hi; ++k)
    max_dev = std::max(max_dev, std::abs(profile.sum[k] - profile.constant));
  profile.ripple = max_dev / profile.constant;

  profile.covered.assign(n, 0);
  for (int k = 0; k < n; ++k)
    if (std::abs(profile.sum[k] - profile.constant) <= 1e-9 * profile.constant)
      profile.covered[k] = 1;
  return profile;
}

Gcc cola_reconstruct(const FsGccMatrix& mat) {
  const int n = mat.rows();
  const int L = mat.L;
  const SpectralWindow& win = mat.window;

  const ColaProfile profile = cola_profile(win, L);
  if (profile.ripple > 1e-9) {
    char msg[96];
    std::snprintf(msg, sizeof(msg), "COLA violated: overlap-add ripple %.3e", profile.ripple);
    throw std::runtime_error(msg);
  }

  // Move every band back to its center and accumulate the spectrum.
  Eigen::VectorXcd accum = Eigen::VectorXcd::Zero(n);
  for (int l = 0; l < L; ++l) {
    const Eigen::VectorXcd spec = dft(Eigen::VectorXcd(from_lag_order(mat.R.col(l).eval())));
    const int shift = l * win.M;
    for (int k = 0; k < n; ++k) accum[k] += spec[((k - shift) % n + n) % n];
  }

  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < n; ++k)
    if (profile.covered[k]) z[k] = accum[k] / profile.constant;
  // Hermitian completion of the uncovered mirror bins keeps the result real.
  for (int k = 0; k < n; ++k) {
    const int m = (n - k) % n;
    if (profile.covered[k] && !profile.covered[m]) z[m] = std::conj(z[k]);
  }

  const Eigen::VectorXcd r = idft(z);
  const double imag_residue = r.imag().cwiseAbs().maxCoeff();
  if (imag_residue > 1e-6) throw std::runtime_error("non-Hermitian spectrum");

  Gcc out;
  out.values = to_lag_order(Eigen::VectorXd(r.real()));
  out.peak_lag = argmax_lag(out.values);
  out.peak_value = out.values[lag_to_index(out.peak_lag, n)];
  return out;
}

void write_matrix_csv(const FsGccMatrix& mat, std::ostream& os) {
  os << "lag,band,re,im\n";
  char buf[96];
  for (int l = 0; l < mat.L; ++l) {
    for (int i = 0; i < mat.rows(); ++i) {
      const std::complex<double> v = mat.R(i, l);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", index_to_lag(i, mat.rows()),
                    l, v.real(), v.imag());
      os << buf;
    }
  }
}

}  // namespace fsgcc
