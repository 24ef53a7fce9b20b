#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace clyap {

struct StudyConfig {
  std::vector<int> d_list{3};
  std::vector<int> n_list{1000, 2000, 4000, 8000};
  std::vector<double> gamma_list{10.0};
  std::vector<double> rho_list{0.2};
  double lambda = 0.5;
  double mu = 0.8;
  double nu = 1.0;
  int replications = 100;
  std::uint64_t seed = 1;
  std::vector<int> orders{2, 3};
  int r = 3;  // order used by identifiability commands
  std::string output_dir = "study_out";
  int omega_sample_size = 1000000;
  double trunc_tol = 1e-12;
  bool svg = false;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
  /// Full grid: d in {3, 6, 12}, n in {1000, 2000, 4000, 8000},
  /// gamma in {5, 10, 15}, rho in {0.2, 0.8}.
  static StudyConfig full_grid();
  static StudyConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Metrics of one (d, gamma, rho, n) setting over its replications; the
/// true drift is normalized to unit Frobenius norm.
struct StudyRecord {
  int d = 0;
  double gamma = 0.0;
  double rho = 0.0;
  int n = 0;
  int replications = 0;
  int failures = 0;  // replications with a degenerate singular spectrum
  double mse = 0.0;
  double total_variance_term = 0.0;
  double total_squared_bias = 0.0;
  double scaled_rmse = 0.0;       // sqrt(n) sqrt(mse)
  double scaled_bias = 0.0;       // sqrt(n) |mean estimate - M|_F
  double asymptotic_rmse = 0.0;   // sqrt(trace of the asymptotic covariance)
  double mean_sigma_min = 0.0;
  double mean_gap = 0.0;
  int unstable_estimates = 0;
};

struct ReplicationRecord {
  int d = 0;
  double gamma = 0.0;
  double rho = 0.0;
  int n = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  double sigma_min = 0.0;
  double gap = 0.0;
  bool stable = false;
  double squared_error = 0.0;
  double cos_angle = 0.0;
  Eigen::MatrixXd m_hat;
};

struct StudyResult {
  std::vector<StudyRecord> records;
  std::vector<ReplicationRecord> estimates;
};

using StudyProgress = std::function<void(const std::string&)>;

StudyResult run_study(const StudyConfig& config, const StudyProgress& progress = {});

inline constexpr const char* kSummaryCsv = "study_summary.csv";
inline constexpr const char* kEstimatesCsv = "study_estimates.csv";
inline constexpr const char* kPlotSvg = "study_scaled_errors.svg";

std::string summary_csv_header();
std::string estimates_csv_header();

/// Writes the two CSV files (and the SVG chart when config.svg) into
/// config.output_dir, creating it if needed.
void write_study_outputs(const StudyResult& result, const StudyConfig& config);

}  // namespace clyap
