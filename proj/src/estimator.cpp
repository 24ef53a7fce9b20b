#include "clyap/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clyap/error.hpp"
#include "clyap/lyapunov.hpp"

namespace clyap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct SmallestPair {
  Eigen::VectorXd v;
  double sigma_min = 0.0;
  double gap = 0.0;
};

SmallestPair smallest_singular_pair(const Eigen::MatrixXd& a) {
  const Eigen::Index p = a.cols();
  if (p < 1) throw InvalidArgument("least_singular_vector: matrix has no columns");
  if (a.rows() + 1 < p) {
    throw DegenerateSpectrum("least_singular_vector: fewer than cols-1 rows, kernel is not one-dimensional");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  // pad with the zero singular values of a wide matrix
  Eigen::VectorXd s = Eigen::VectorXd::Zero(p);
  s.head(svd.singularValues().size()) = svd.singularValues();
  SmallestPair out;
  out.v = svd.matrixV().col(p - 1);
  out.sigma_min = s(p - 1);
  out.gap = p >= 2 ? s(p - 2) - s(p - 1) : std::numeric_limits<double>::infinity();
  const double smax = s(0);
  const double tol = 10.0 * static_cast<double>(std::max(a.rows(), p)) * kEps * smax;
  if (p >= 2 && !(out.gap > tol)) {
    throw DegenerateSpectrum("least_singular_vector: smallest singular value is not simple (gap=" +
                             std::to_string(out.gap) + ")");
  }
  return out;
}

void apply_sign_convention(Eigen::VectorXd& v, const CoefficientSystem& sys, int d) {
  const Eigen::MatrixXd m = sys.to_matrix(v, d);
  const double tr = m.trace();
  bool flip = tr > 0.0;
  if (std::abs(tr) <= 1e-12) {
    Eigen::Index i = 0;
    m.diagonal().cwiseAbs().maxCoeff(&i);
    flip = m(i, i) > 0.0;
  }
  if (flip) v = -v;
}

CoefficientSystem full_columns(const Eigen::MatrixXd& a) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(a.cols()))));
  if (static_cast<Eigen::Index>(d) * d != a.cols()) {
    throw InvalidArgument("least_singular_vector: column count must be d^2");
  }
  CoefficientSystem sys;
  sys.matrix = a;
  sys.col_labels = all_edges(d);
  return sys;
}

}  // namespace

DriftEstimate least_singular_vector(const CoefficientSystem& sys, int d) {
  if (sys.matrix.cols() != static_cast<Eigen::Index>(sys.col_labels.size())) {
    throw InvalidArgument("least_singular_vector: column labels do not match the matrix");
  }
  auto pair = smallest_singular_pair(sys.matrix);
  apply_sign_convention(pair.v, sys, d);
  DriftEstimate est;
  est.m_hat = sys.to_matrix(pair.v, d);
  est.sigma_min = pair.sigma_min;
  est.gap = pair.gap;
  est.stable = is_stable(est.m_hat);
  est.columns = sys.col_labels;
  return est;
}

DriftEstimate least_singular_vector(const Eigen::MatrixXd& a) {
  const auto sys = full_columns(a);
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(a.cols()))));
  return least_singular_vector(sys, d);
}

std::vector<int> estimator_orders(std::vector<int> orders) {
  orders = normalize_orders(std::move(orders));
  if (orders.front() != 2 || orders.size() < 2) {
    throw InvalidArgument("estimator needs order 2 and at least one order >= 3");
  }
  return orders;
}

CoefficientSystem drift_system(const std::vector<SymmetricTensor>& cumulants,
                               const std::optional<DirectedGraph>& graph) {
  std::vector<int> orders;
  for (const auto& t : cumulants) orders.push_back(t.order());
  estimator_orders(orders);
  return assemble_system(cumulants, RowPolicy::kOffDiagonal, graph);
}

DriftEstimate estimate_drift(const std::vector<SymmetricTensor>& cumulants,
                             const std::optional<DirectedGraph>& graph) {
  if (cumulants.empty()) throw InvalidArgument("estimate_drift: no cumulants");
  return least_singular_vector(drift_system(cumulants, graph), cumulants.front().dim());
}

DriftEstimate estimate_drift(const SampleBatch& sample, const std::vector<int>& orders,
                             const std::optional<DirectedGraph>& graph) {
  const auto ords = estimator_orders(orders);
  const auto cv = empirical_cumulants(sample, ords);
  std::vector<SymmetricTensor> blocks;
  for (int k : ords) blocks.push_back(cv.block(k));
  return estimate_drift(blocks, graph);
}

Eigen::MatrixXd moore_penrose(const Eigen::MatrixXd& a, double rtol) {
  if (a.size() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  if (rtol < 0.0) rtol = static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rtol * s(0)) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd kernel_projected_pinv(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index keep = s.size();
  if (keep == a.cols()) --keep;  // drop the least singular direction
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * kEps * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < keep; ++i) {
    if (s(i) > tol) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

SingularVectorJacobian::SingularVectorJacobian(const Eigen::MatrixXd& a, const Eigen::VectorXd& v)
    : pinv_(kernel_projected_pinv(a)), v_(v) {
  if (v_.size() == 0) {
    const auto est = least_singular_vector(a);
    v_ = Eigen::Map<const Eigen::VectorXd>(est.m_hat.data(), est.m_hat.size());
  }
  if (v_.size() != a.cols()) throw InvalidArgument("SingularVectorJacobian: kernel vector length mismatch");
}

Eigen::VectorXd SingularVectorJacobian::apply(const Eigen::MatrixXd& h) const {
  if (h.rows() != pinv_.cols() || h.cols() != pinv_.rows()) {
    throw InvalidArgument("SingularVectorJacobian: perturbation has the wrong shape");
  }
  return -(pinv_ * (h * v_));
}

Eigen::MatrixXd stacked_B(const Eigen::MatrixXd& m, const std::vector<int>& orders,
                          const std::vector<RowLabel>& rows) {
  const int d = static_cast<int>(m.rows());
  std::vector<std::pair<int, Eigen::MatrixXd>> blocks;
  std::vector<Eigen::Index> offsets;
  Eigen::Index total = 0;
  for (int k : orders) {
    offsets.push_back(total);
    blocks.emplace_back(k, build_B_k(m, k));
    total += static_cast<Eigen::Index>(num_unique(d, k));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), total);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t b = 0;
    while (b < blocks.size() && blocks[b].first != rows[r].order) ++b;
    if (b == blocks.size()) throw InvalidArgument("stacked_B: row order missing from the order list");
    const auto& bk = blocks[b].second;
    out.row(static_cast<Eigen::Index>(r)).segment(offsets[b], bk.cols()) =
        bk.row(static_cast<Eigen::Index>(unique_rank(rows[r].index, d)));
  }
  return out;
}

AsymptoticCovariance asymptotic_covariance(const Eigen::MatrixXd& m, const CoefficientSystem& sys,
                                           const Eigen::MatrixXd& omega, const std::vector<int>& orders) {
  const auto ords = normalize_orders(orders);
  const double norm = m.norm();
  if (!(norm > 0.0)) throw InvalidArgument("asymptotic_covariance: M must be nonzero");
  const Eigen::MatrixXd b = stacked_B(m / norm, ords, sys.row_labels);
  if (omega.rows() != b.cols() || omega.cols() != b.cols()) {
    throw InvalidArgument("asymptotic_covariance: Omega is " + std::to_string(omega.rows()) + "x" +
                          std::to_string(omega.cols()) + ", expected " + std::to_string(b.cols()));
  }
  const Eigen::MatrixXd g = kernel_projected_pinv(sys.matrix) * b;
  AsymptoticCovariance out;
  out.matrix = g * omega * g.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  out.total_variance = out.matrix.trace();
  return out;
}

}  // namespace clyap
