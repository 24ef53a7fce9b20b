#include "clyap/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clyap/error.hpp"

namespace clyap {

MultiIndex::MultiIndex(std::vector<int> indices) : idx_(std::move(indices)) {
  if (idx_.empty()) throw InvalidArgument("multi-index must have order >= 1");
  std::sort(idx_.begin(), idx_.end());
}

int MultiIndex::multiplicity(int node) const noexcept {
  return static_cast<int>(std::count(idx_.begin(), idx_.end(), node));
}

bool MultiIndex::is_diagonal() const noexcept {
  return std::adjacent_find(idx_.begin(), idx_.end(), std::not_equal_to<>()) ==
         idx_.end();
}

MultiIndex MultiIndex::replace_one(int from, int to) const {
  auto copy = idx_;
  auto it = std::find(copy.begin(), copy.end(), from);
  if (it == copy.end()) throw InvalidArgument("replace_one: label not present");
  *it = to;
  return MultiIndex(std::move(copy));
}

std::size_t num_unique(int d, int k) {
  if (d < 1 || k < 0) return 0;
  // binom(d+k-1, k) without overflow for the sizes used here
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(d - 1 + i) / static_cast<std::size_t>(i);
  }
  return result;
}

std::vector<MultiIndex> unique_indices(int d, int k) {
  if (d < 1 || k < 1) throw InvalidArgument("unique_indices: need d >= 1, k >= 1");
  std::vector<MultiIndex> out;
  out.reserve(num_unique(d, k));
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  while (true) {
    out.emplace_back(cur);
    // advance the rightmost position that can still grow, reset the tail
    int p = k - 1;
    while (p >= 0 && cur[static_cast<std::size_t>(p)] == d - 1) --p;
    if (p < 0) break;
    const int v = cur[static_cast<std::size_t>(p)] + 1;
    for (int q = p; q < k; ++q) cur[static_cast<std::size_t>(q)] = v;
  }
  return out;
}

std::size_t unique_rank(const MultiIndex& idx, int d) {
  const int k = idx.order();
  std::size_t rank = 0;
  int prev = 0;
  for (int p = 0; p < k; ++p) {
    const int remaining = k - p - 1;
    for (int v = prev; v < idx[static_cast<std::size_t>(p)]; ++v) {
      rank += num_unique(d - v, remaining);
    }
    prev = idx[static_cast<std::size_t>(p)];
  }
  return rank;
}

// ---------------------------------------------------------------- DenseTensor

DenseTensor::DenseTensor(std::vector<int> dims, double fill)
    : dims_(std::move(dims)) {
  std::size_t total = 1;
  for (int n : dims_) {
    if (n < 0) throw InvalidArgument("negative tensor dimension");
    total *= static_cast<std::size_t>(n);
  }
  data_.assign(total, fill);
}

std::size_t DenseTensor::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  std::size_t stride = 1;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    f += static_cast<std::size_t>(idx[m]) * stride;
    stride *= static_cast<std::size_t>(dims_[m]);
  }
  return f;
}

std::vector<int> DenseTensor::unflat(std::size_t i) const {
  std::vector<int> idx(dims_.size());
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    idx[m] = static_cast<int>(i % static_cast<std::size_t>(dims_[m]));
    i /= static_cast<std::size_t>(dims_[m]);
  }
  return idx;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.dims_ != dims_) throw InvalidArgument("tensor shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseTensor::is_symmetric(double tol) const {
  if (dims_.empty()) return true;
  if (std::adjacent_find(dims_.begin(), dims_.end(), std::not_equal_to<>()) !=
      dims_.end()) {
    return false;
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    auto idx = unflat(i);
    std::sort(idx.begin(), idx.end());
    if (std::abs(data_[i] - data_[flat(idx)]) > tol) return false;
  }
  return true;
}

DenseTensor n_mode_product(const DenseTensor& t, const Eigen::MatrixXd& m,
                           int n) {
  if (n < 1 || n > t.order()) throw InvalidArgument("n_mode_product: mode out of range");
  const auto mode = static_cast<std::size_t>(n - 1);
  if (m.cols() != t.dims()[mode]) {
    throw InvalidArgument("n_mode_product: matrix columns must equal mode size");
  }
  auto out_dims = t.dims();
  out_dims[mode] = static_cast<int>(m.rows());
  DenseTensor out(out_dims);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = t.at_flat(i);
    if (v == 0.0) continue;
    auto idx = t.unflat(i);
    const int src = idx[mode];
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      idx[mode] = static_cast<int>(j);
      out(idx) += v * m(j, src);
    }
  }
  return out;
}

// ------------------------------------------------------------ SymmetricTensor

SymmetricTensor::SymmetricTensor(int d, int k) : d_(d), k_(k) {
  if (d < 1 || k < 1) throw InvalidArgument("SymmetricTensor: need d >= 1, k >= 1");
  values_.assign(num_unique(d, k), 0.0);
}

SymmetricTensor SymmetricTensor::from_vec_u(int d, int k, const Eigen::VectorXd& v) {
  SymmetricTensor t(d, k);
  if (static_cast<std::size_t>(v.size()) != t.size()) {
    throw InvalidArgument("from_vec_u: length does not match binom(d+k-1,k)");
  }
  std::copy(v.begin(), v.end(), t.values_.begin());
  return t;
}

SymmetricTensor SymmetricTensor::diagonal(int k, const Eigen::VectorXd& diag) {
  const int d = static_cast<int>(diag.size());
  SymmetricTensor t(d, k);
  for (int i = 0; i < d; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(k), i);
    t.set(idx, diag(i));
  }
  return t;
}

SymmetricTensor SymmetricTensor::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("from_matrix: matrix must be square");
  const int d = static_cast<int>(m.rows());
  SymmetricTensor t(d, 2);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const std::vector<int> idx{i, j};
      t.set(idx, m(i, j));
    }
  }
  return t;
}

SymmetricTensor SymmetricTensor::from_dense(const DenseTensor& t, double tol) {
  if (t.order() < 1) throw InvalidArgument("from_dense: empty tensor");
  if (!t.is_symmetric(tol * std::max(1.0, t.max_abs()))) {
    throw InvalidArgument("from_dense: tensor is not symmetric");
  }
  SymmetricTensor s(t.dims()[0], t.order());
  const auto idxs = unique_indices(s.d_, s.k_);
  for (std::size_t r = 0; r < idxs.size(); ++r) s.values_[r] = t(idxs[r].indices());
  return s;
}

double SymmetricTensor::get(std::span<const int> idx) const {
  return get(MultiIndex(std::vector<int>(idx.begin(), idx.end())));
}

double SymmetricTensor::get(const MultiIndex& idx) const {
  if (idx.order() != k_) throw InvalidArgument("SymmetricTensor::get: wrong order");
  return values_[unique_rank(idx, d_)];
}

void SymmetricTensor::set(std::span<const int> idx, double value) {
  MultiIndex mi(std::vector<int>(idx.begin(), idx.end()));
  if (mi.order() != k_) throw InvalidArgument("SymmetricTensor::set: wrong order");
  if (mi[0] < 0 || mi[static_cast<std::size_t>(k_ - 1)] >= d_) {
    throw InvalidArgument("SymmetricTensor::set: label out of range");
  }
  values_[unique_rank(mi, d_)] = value;
}

Eigen::VectorXd SymmetricTensor::vec_u() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(),
                                           static_cast<Eigen::Index>(values_.size()));
}

DenseTensor SymmetricTensor::to_dense() const {
  DenseTensor t(std::vector<int>(static_cast<std::size_t>(k_), d_));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.at_flat(i) = values_[unique_rank(MultiIndex(t.unflat(i)), d_)];
  }
  return t;
}

Eigen::MatrixXd SymmetricTensor::to_matrix() const {
  if (k_ != 2) throw InvalidArgument("to_matrix: tensor order must be 2");
  Eigen::MatrixXd m(d_, d_);
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) m(i, j) = get(MultiIndex{i, j});
  }
  return m;
}

}  // namespace clyap
