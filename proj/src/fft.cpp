#include "fsgcc/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace fsgcc {
namespace {

// Plans are created once per (size, direction) and reused; fftw_execute_dft
// on a shared plan with fresh buffers is thread-safe, plan creation is not.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const int64_t key = static_cast<int64_t>(n) * 4 + (sign == FFTW_FORWARD ? 0 : 1);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::unordered_map<int64_t, fftw_plan> plans_;
};

Eigen::VectorXcd run(const Eigen::VectorXcd& x, int sign) {
  if (x.size() == 0) throw std::invalid_argument("empty vector");
  const int n = static_cast<int>(x.size());
  Eigen::VectorXcd in = x;  // fftw requires distinct, writable input
  Eigen::VectorXcd out(n);
  fftw_plan p = PlanCache::instance().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) { return run(x, FFTW_FORWARD); }

Eigen::VectorXcd idft(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out = run(x, FFTW_BACKWARD);
  out /= static_cast<double>(x.size());
  return out;
}

Eigen::VectorXcd dft(const Eigen::VectorXd& x) {
  return dft(Eigen::VectorXcd(x.cast<std::complex<double>>()));
}

}  // namespace fsgcc
