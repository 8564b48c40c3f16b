#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "fsgcc/spectral.hpp"

namespace fsgcc {

/// Frequency-sliding GCC matrix: N lag-ordered rows by L sub-band columns.
/// Column l is the inverse DFT of the PHAT spectrum windowed at band
/// center bin l*M.
struct FsGccMatrix {
  Eigen::MatrixXcd R;
  SpectralWindow window;
  int L = 0;
  std::vector<int> band_center_bins;

  int rows() const { return static_cast<int>(R.rows()); }
};

/// Noiseless single-path reference: the matrix is the outer product of the
/// window response shifted to tau0 with per-band unit phasors.
struct IdealFsGcc {
  int tau0 = 0;
  FsGccMatrix matrix;
  Eigen::VectorXd phi0;  // lag-ordered shifted window response
  Eigen::VectorXcd e;    // e[l] = exp(j 2pi l M tau0 / N)
};

/// Per-band mixing model used to synthesize noisy matrices for tests:
/// column l = alpha_l * ideal_l + (1 - alpha_l) * noise_l.
struct NoisySubbandModel {
  Eigen::VectorXd alphas;
  Eigen::MatrixXcd noise_cols;  // N x L, each column with ||n_l|| = ||phi||
};

/// Number of sub-bands fitting below Nyquist: floor((N/2 - B/2 + M) / M).
int num_bands(int N, int B, int M);

/// Single sub-band GCC: inverse DFT of the PHAT spectrum shifted down by
/// l*M bins and windowed, returned lag-ordered. Complex in general.
Eigen::VectorXcd subband_gcc(const PhatSpectrum& psi, const SpectralWindow& win, int l);

FsGccMatrix build_fsgcc_matrix(const PhatSpectrum& psi, const SpectralWindow& win);

/// Construct the rank-one reference matrix for an integer delay.
IdealFsGcc ideal_fsgcc(int tau0, const SpectralWindow& win);

/// Mix the ideal matrix with freshly generated band-shaped noise columns.
/// Noise spectra are circularly-symmetric Gaussian shaped by the window at
/// baseband (the same spectral support the sub-band columns live on), each
/// normalized to ||n_l|| = ||phi||.
std::pair<FsGccMatrix, NoisySubbandModel> synthesize_noisy_fsgcc(
    const IdealFsGcc& ideal, const Eigen::VectorXd& alphas, uint64_t rng_seed);

/// Overlap-add profile of the window hopped across the L band centers.
struct ColaProfile {
  Eigen::VectorXd sum;            // per-bin sum of shifted windows, length N
  double constant = 0.0;          // overlap-add constant over the interior
  double ripple = 0.0;            // max relative deviation over the interior
  std::vector<uint8_t> covered;   // bins where sum == constant (within 1e-9)
};

ColaProfile cola_profile(const SpectralWindow& win, int L);

/// Reconstruct the covered-band conventional GCC from the matrix columns.
/// Requires the window/hop pair to overlap-add to a constant over the band
/// centers; throws with the measured ripple otherwise.
Gcc cola_reconstruct(const FsGccMatrix& mat);

/// Debug dump: one "lag,band,re,im" row per entry.
void write_matrix_csv(const FsGccMatrix& mat, std::ostream& os);

}  // namespace fsgcc
