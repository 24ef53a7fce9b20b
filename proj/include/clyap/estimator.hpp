#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "clyap/coeff.hpp"
#include "clyap/cumulants.hpp"
#include "clyap/graph.hpp"

namespace clyap {

/// Normalized drift estimate read from the least right singular vector.
struct DriftEstimate {
  Eigen::MatrixXd m_hat;  // Frobenius norm 1, trace <= 0
  double sigma_min = 0.0;
  double gap = 0.0;  // second smallest minus smallest singular value
  bool stable = false;
  std::vector<Edge> columns;
};

/// Unit vector v minimising |A v|, signed so the matrix it encodes has
/// negative trace (ties broken by making the largest-magnitude diagonal entry
/// negative). Throws DegenerateSpectrum when the smallest singular value is
/// not simple.
DriftEstimate least_singular_vector(const CoefficientSystem& sys, int d);
/// Same for a matrix over all d^2 columns in column-major order.
DriftEstimate least_singular_vector(const Eigen::MatrixXd& a);

/// Off-diagonal system built from cumulant tensors (order 2 plus one or more
/// higher orders), optionally restricted to a graph's edges.
CoefficientSystem drift_system(const std::vector<SymmetricTensor>& cumulants,
                               const std::optional<DirectedGraph>& graph = std::nullopt);

DriftEstimate estimate_drift(const std::vector<SymmetricTensor>& cumulants,
                             const std::optional<DirectedGraph>& graph = std::nullopt);
DriftEstimate estimate_drift(const SampleBatch& sample, const std::vector<int>& orders,
                             const std::optional<DirectedGraph>& graph = std::nullopt);

/// Orders used by the estimator: must contain 2 and at least one order >= 3.
std::vector<int> estimator_orders(std::vector<int> orders);

/// SVD pseudoinverse with singular values <= rtol * sigma_max treated as zero.
/// A negative rtol selects max(rows, cols) * eps.
Eigen::MatrixXd moore_penrose(const Eigen::MatrixXd& a, double rtol = -1.0);

/// Derivative of the least-singular-vector map at a matrix whose smallest
/// singular value is zero: DG(A)[H] = -A^+ H v with v the kernel vector.
class SingularVectorJacobian {
 public:
  /// `v` is the kernel direction; when empty it is computed from `a`.
  explicit SingularVectorJacobian(const Eigen::MatrixXd& a, const Eigen::VectorXd& v = {});

  Eigen::VectorXd apply(const Eigen::MatrixXd& h) const;
  const Eigen::MatrixXd& pinv() const noexcept { return pinv_; }
  const Eigen::VectorXd& kernel() const noexcept { return v_; }

 private:
  Eigen::MatrixXd pinv_;
  Eigen::VectorXd v_;
};

/// Pseudoinverse of A with its least singular direction removed, i.e. the
/// pseudoinverse of the nearest matrix whose kernel contains that direction.
Eigen::MatrixXd kernel_projected_pinv(const Eigen::MatrixXd& a);

/// Block-diagonal B-matrix over the requested orders, keeping only the rows
/// listed in `rows` (in that order). Columns follow the concatenated vec_u
/// layout of CumulantVector.
Eigen::MatrixXd stacked_B(const Eigen::MatrixXd& m, const std::vector<int>& orders,
                          const std::vector<RowLabel>& rows);

struct AsymptoticCovariance {
  Eigen::MatrixXd matrix;  // over the system's columns
  double total_variance = 0.0;
};

/// (A^+ B(M)) Omega (A^+ B(M))^T for the normalized M, with B restricted to
/// the rows of `sys`.
AsymptoticCovariance asymptotic_covariance(const Eigen::MatrixXd& m, const CoefficientSystem& sys,
                                           const Eigen::MatrixXd& omega, const std::vector<int>& orders);

}  // namespace clyap
