#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clyap/cumulants.hpp"

namespace clyap {

/// Independent compound Poisson coordinates.
struct LevySpec {
  Eigen::VectorXd lambdas;
  std::vector<JumpDistribution> jumps;

  int dim() const noexcept { return static_cast<int>(lambdas.size()); }
  void validate() const;
  /// Same rate and beta(mu, nu) jumps on every coordinate.
  static LevySpec uniform_beta(int d, double lambda, double mu, double nu);
  /// Diagonal of the order-k input cumulant.
  Eigen::VectorXd cumulant_diagonal(int k) const;
};

/// M = (gamma E_skew - d I)(I - eta E), eta = rho / (1 + rho (d - 1)).
struct DriftSpec {
  int d = 3;
  double gamma = 10.0;
  double rho = 0.2;

  double eta() const noexcept { return rho / (1.0 + rho * (d - 1)); }
  void validate() const;
};

Eigen::MatrixXd construct_M(const DriftSpec& spec);

/// c (I + eta / (1 - d eta) E) with c = lambda mu (mu nu + 1) / (2 d (nu + 1)).
Eigen::MatrixXd closed_form_sigma(const DriftSpec& spec, double lambda, double mu, double nu);

inline constexpr double kDefaultTruncTol = 1e-12;
inline constexpr double kMaxEigvecCond = 1e8;

/// n independent steady-state draws of X = int_0^inf e^{sM} dZ_s via the
/// eigendecomposition of M, truncating the jump series at
/// T = ln(trunc_tol) / max Re(eig). Draw t uses its own RNG stream derived
/// from (seed, t), so batches are reproducible for any thread count.
/// Throws NonStable or IllConditionedEigenvectors.
SampleBatch sample_steady_state(const Eigen::MatrixXd& m, const LevySpec& levy, int n,
                                std::uint64_t seed, double trunc_tol = kDefaultTruncTol,
                                unsigned threads = 0);

/// Two-point law with E[X^2] = c2 and E[X^r] = cr. Throws Infeasible when no
/// such law exists (even r with cr < c2^{r/2} or cr < 0).
TwoPointJump two_point_jump(double c2, double cr, int r);

}  // namespace clyap
