#include "fsgcc/tde.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fsgcc/fft.hpp"
#include "fsgcc/spectral.hpp"

namespace fsgcc {

std::string to_string(TdeMethod m) {
  switch (m) {
    case TdeMethod::gcc: return "gcc";
    case TdeMethod::fs_svd: return "fs_svd";
    case TdeMethod::fs_wsvd: return "fs_wsvd";
  }
  return "gcc";
}

TdeMethod tde_method_from_string(const std::string& s) {
  if (s == "gcc") return TdeMethod::gcc;
  if (s == "fs_svd") return TdeMethod::fs_svd;
  if (s == "fs_wsvd") return TdeMethod::fs_wsvd;
  throw std::invalid_argument("unknown method: " + s);
}

TdoaEstimate estimate_tdoa(const Eigen::VectorXd& gcc_lag, bool refine) {
  const int n = static_cast<int>(gcc_lag.size());
  if (n == 0 || gcc_lag.isZero(0.0)) throw std::invalid_argument("all-zero GCC");

  TdoaEstimate est;
  est.tau_hat = argmax_lag(gcc_lag);

  if (refine) {
    const int idx = lag_to_index(est.tau_hat, n);
    if (idx > 0 && idx < n - 1) {
      const double ym = gcc_lag[idx - 1];
      const double y0 = gcc_lag[idx];
      const double yp = gcc_lag[idx + 1];
      const double denom = ym - 2.0 * y0 + yp;
      if (denom < 0.0) est.tau_hat_frac = est.tau_hat + 0.5 * (ym - yp) / denom;
    }
  }
  return est;
}

std::optional<double> fspr(const Eigen::VectorXd& gcc_lag, int tau_hat,
                           double exclusion_halfwidth) {
  const int n = static_cast<int>(gcc_lag.size());
  const int peak_idx = lag_to_index(tau_hat, n);
  if (peak_idx < 0 || peak_idx >= n) throw std::invalid_argument("tau_hat out of range");
  const double peak = gcc_lag[peak_idx];
  if (peak <= 0.0) return std::nullopt;

  double second = 0.0;
  bool found = false;
  for (int i = 1; i + 1 < n; ++i) {
    if (std::abs(index_to_lag(i, n) - tau_hat) <= exclusion_halfwidth) continue;
    const double v = gcc_lag[i];
    if (v <= 0.0) continue;
    const bool is_max = v >= gcc_lag[i - 1] && v >= gcc_lag[i + 1] &&
                        (v > gcc_lag[i - 1] || v > gcc_lag[i + 1]);
    if (is_max && (!found || v > second)) {
      second = v;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return 20.0 * std::log10(peak / second);
}

double correlation_time(const Eigen::VectorXd& signal) {
  const Eigen::Index len = signal.size();
  if (len == 0 || signal.squaredNorm() == 0.0)
    throw std::invalid_argument("zero-energy signal");

  // Linear (non-circular) autocorrelation via zero-padded FFT.
  Eigen::Index fft_len = 1;
  while (fft_len < 2 * len) fft_len <<= 1;
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(fft_len);
  padded.head(len) = signal;
  const Eigen::VectorXcd spec = dft(padded);
  Eigen::VectorXcd power(fft_len);
  for (Eigen::Index k = 0; k < fft_len; ++k) power[k] = std::norm(spec[k]);
  const Eigen::VectorXcd acf = idft(power);

  const double peak = acf[0].real();
  const double threshold = peak / std::sqrt(2.0);
  for (Eigen::Index t = 1; t < len; ++t) {
    const double cur = acf[t].real();
    if (cur < threshold) {
      const double prev = acf[t - 1].real();
      const double frac = (prev - threshold) / (prev - cur);
      return 2.0 * (static_cast<double>(t - 1) + frac);
    }
  }
  return 2.0 * static_cast<double>(len - 1);
}

bool classify_anomalous(double abs_error, double t_c) {
  if (abs_error < 0.0 || t_c <= 0.0) throw std::invalid_argument("invalid error or T_c");
  return abs_error > t_c / 2.0;
}

MetricsReport aggregate_metrics(const std::vector<EstimateRecord>& estimates, double t_c) {
  if (estimates.empty()) throw std::invalid_argument("no estimates");

  MetricsReport report;
  report.t_c = t_c;
  report.n_total = static_cast<int>(estimates.size());

  double err_sum = 0.0;
  double fspr_sum = 0.0;
  int fspr_count = 0;
  std::vector<double> na_errors;
  na_errors.reserve(estimates.size());
  for (const auto& e : estimates) {
    const double err = std::abs(e.tau_hat - e.tau_true);
    if (classify_anomalous(err, t_c)) {
      ++report.n_anomalous;
    } else {
      na_errors.push_back(err);
      err_sum += err;
      if (e.fspr_db) {
        fspr_sum += *e.fspr_db;
        ++fspr_count;
      }
    }
  }
  report.n_nonanomalous = static_cast<int>(na_errors.size());
  report.p_anomalous = static_cast<double>(report.n_anomalous) / report.n_total;

  if (report.n_nonanomalous > 0) {
    const double mae = err_sum / report.n_nonanomalous;
    report.mae_na = mae;
    double var = 0.0;
    for (double err : na_errors) var += (err - mae) * (err - mae);
    report.sdae_na = std::sqrt(var / report.n_nonanomalous);  // population form
    if (fspr_count > 0) report.fspr_na_db = fspr_sum / fspr_count;
  }
  return report;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", *v);
  return buf;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "n_total,n_anomalous,n_nonanomalous,p_anomalous,mae_na,sdae_na,fspr_na_db,t_c";
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::string row;
  row += std::to_string(r.n_total) + ',' + std::to_string(r.n_anomalous) + ',' +
         std::to_string(r.n_nonanomalous) + ',';
  row += fmt_num(r.p_anomalous) + ',';
  row += fmt_opt(r.mae_na) + ',';
  row += fmt_opt(r.sdae_na) + ',';
  row += fmt_opt(r.fspr_na_db) + ',';
  row += fmt_num(r.t_c);
  return row;
}

std::string metrics_text_block(const MetricsReport& r) {
  std::string text;
  text += "n_total = " + std::to_string(r.n_total) + "\n";
  text += "n_anomalous = " + std::to_string(r.n_anomalous) + "\n";
  text += "n_nonanomalous = " + std::to_string(r.n_nonanomalous) + "\n";
  text += "p_anomalous = " + fmt_num(r.p_anomalous) + "\n";
  text += "mae_na = " + (r.mae_na ? fmt_num(*r.mae_na) : "absent") + "\n";
  text += "sdae_na = " + (r.sdae_na ? fmt_num(*r.sdae_na) : "absent") + "\n";
  text += "fspr_na_db = " + (r.fspr_na_db ? fmt_num(*r.fspr_na_db) : "absent") + "\n";
  text += "t_c = " + fmt_num(r.t_c) + "\n";
  return text;
}

}  // namespace fsgcc
