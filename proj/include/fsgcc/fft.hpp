#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fsgcc {

/// Forward DFT, no normalization: X[k] = sum_n x[n] e^{-j 2pi k n / N}.
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);

/// Inverse DFT with 1/N normalization.
Eigen::VectorXcd idft(const Eigen::VectorXcd& x);

Eigen::VectorXcd dft(const Eigen::VectorXd& x);

/// Reorder an index-ordered length-N vector (index k = frequency/lag bin k,
/// k in [0, N)) into lag order, where entry 0 corresponds to lag -N/2.
template <typename Derived>
auto to_lag_order(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = v.size();
  typename Derived::PlainObject out(n);
  const Eigen::Index half = n / 2;
  out.head(n - half) = v.tail(n - half);
  out.tail(half) = v.head(half);
  return out;
}

template <typename Derived>
auto from_lag_order(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = v.size();
  typename Derived::PlainObject out(n);
  const Eigen::Index half = n / 2;
  out.head(half) = v.tail(half);
  out.tail(n - half) = v.head(n - half);
  return out;
}

inline int lag_to_index(int lag, int n) { return lag + n / 2; }
inline int index_to_lag(int idx, int n) { return idx - n / 2; }

}  // namespace fsgcc
