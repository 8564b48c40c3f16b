#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace fsgcc {

enum class TdeMethod { gcc, fs_svd, fs_wsvd };

std::string to_string(TdeMethod m);
TdeMethod tde_method_from_string(const std::string& s);

struct TdoaEstimate {
  int tau_hat = 0;  // lag in samples
  std::optional<double> tau_hat_frac;
  std::optional<double> fspr_db;
  TdeMethod method = TdeMethod::gcc;
};

/// Peak pick on a lag-ordered GCC; optional 3-point parabolic refinement.
TdoaEstimate estimate_tdoa(const Eigen::VectorXd& gcc_lag, bool refine = false);

/// First-to-second peak ratio in dB. The second peak is the largest local
/// maximum with positive value farther than exclusion_halfwidth lags from
/// tau_hat; absent when no such peak exists.
std::optional<double> fspr(const Eigen::VectorXd& gcc_lag, int tau_hat,
                           double exclusion_halfwidth);

/// Width of the autocorrelation main lobe between the -3 dB points
/// (peak / sqrt(2) crossings, linearly interpolated), in samples.
double correlation_time(const Eigen::VectorXd& signal);

/// An estimate is anomalous when its absolute error exceeds T_c / 2.
bool classify_anomalous(double abs_error, double t_c);

struct EstimateRecord {
  double tau_hat = 0.0;
  double tau_true = 0.0;
  std::optional<double> fspr_db;
};

struct MetricsReport {
  int n_total = 0;
  int n_anomalous = 0;
  int n_nonanomalous = 0;
  double p_anomalous = 0.0;
  std::optional<double> mae_na;
  std::optional<double> sdae_na;
  std::optional<double> fspr_na_db;
  double t_c = 0.0;
};

MetricsReport aggregate_metrics(const std::vector<EstimateRecord>& estimates, double t_c);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);
std::string metrics_text_block(const MetricsReport& report);

}  // namespace fsgcc
