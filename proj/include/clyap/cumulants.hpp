#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "clyap/symtensor.hpp"

namespace clyap {

/// n observations of a d-dimensional vector, one per row.
struct SampleBatch {
  Eigen::MatrixXd rows;

  int n() const noexcept { return static_cast<int>(rows.rows()); }
  int d() const noexcept { return static_cast<int>(rows.cols()); }
  /// Throws InvalidArgument on an empty batch or non-finite entries.
  void validate() const;
};

/// Per-order tables of symmetric quantities (raw moments or cumulants) for
/// orders 1..max_order, each stored in unique_indices order.
class MomentTable {
 public:
  MomentTable() = default;
  MomentTable(int d, int max_order);

  int dim() const noexcept { return d_; }
  int max_order() const noexcept { return static_cast<int>(tables_.size()); }
  double get(const MultiIndex& idx) const;
  std::vector<double>& order(int k);
  const std::vector<double>& order(int k) const;

 private:
  int d_ = 0;
  std::vector<std::vector<double>> tables_;
};

/// m_{i1..ij} = (1/n) sum_t prod_l x_{t,il} for all canonical indices of orders 1..k.
MomentTable raw_moments(const SampleBatch& sample, int max_order);

/// k-th multivariate cumulant from raw moments via the set-partition formula.
SymmetricTensor moments_to_cumulants(const MomentTable& moments, int k);

/// Cumulant tables for all orders 1..max_order.
MomentTable all_cumulants(const MomentTable& moments, int max_order);

/// Inverse transform: k-th raw moment from cumulants of orders 1..k.
SymmetricTensor cumulants_to_moments(const MomentTable& cumulants, int k);

/// Concatenated vec_u blocks of cumulant tensors for a sorted set of orders.
struct CumulantVector {
  int d = 0;
  std::vector<int> orders;
  Eigen::VectorXd values;

  std::size_t offset(int order) const;
  SymmetricTensor block(int order) const;
  static CumulantVector from_tensors(const std::vector<SymmetricTensor>& tensors);
};

/// Orders must be distinct values in 2..6.
std::vector<int> normalize_orders(std::vector<int> orders);

CumulantVector empirical_cumulants(const SampleBatch& sample, const std::vector<int>& orders);

/// Delta-method estimate of the asymptotic covariance of sqrt(n) times the
/// empirical cumulant vector.
Eigen::MatrixXd estimate_omega(const SampleBatch& sample, const std::vector<int>& orders);

/// Nonparametric bootstrap estimate of the same covariance.
Eigen::MatrixXd bootstrap_omega(const SampleBatch& sample, const std::vector<int>& orders,
                                int resamples, std::uint64_t seed);

// ---------------------------------------------------------------- jump laws

struct BetaJump {
  double mu = 0.8;
  double nu = 1.0;
};

/// Mass p at a, 1 - p at b.
struct TwoPointJump {
  double a = 1.0;
  double b = 0.0;
  double p = 1.0;
};

struct ConstantJump {
  double c = 1.0;
};

using JumpDistribution = std::variant<BetaJump, TwoPointJump, ConstantJump>;

void validate_jump(const JumpDistribution& jump);

/// prod_{r<k} (mu nu + r) / (nu + r).
double beta_raw_moment(double mu, double nu, int k);

double jump_raw_moment(const JumpDistribution& jump, int k);

/// Diagonal of the order-k cumulant tensor of the unit-time increment of
/// independent compound Poisson coordinates: lambda_i * E[J_i^k].
Eigen::VectorXd compound_poisson_cumulants(const Eigen::VectorXd& lambdas,
                                           const std::vector<JumpDistribution>& jumps, int k);

}  // namespace clyap
