#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clyap {

/// Sorted (nondecreasing) multi-index into a symmetric tensor.
///
/// Node labels are zero-based inside the library; file formats and the CLI
/// use one-based labels and convert at the boundary.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> indices);
  MultiIndex(std::initializer_list<int> indices)
      : MultiIndex(std::vector<int>(indices)) {}

  int order() const noexcept { return static_cast<int>(idx_.size()); }
  int operator[](std::size_t pos) const { return idx_[pos]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }
  const std::vector<int>& indices() const noexcept { return idx_; }

  /// Number of positions equal to `node`.
  int multiplicity(int node) const noexcept;

  /// True for (i, i, ..., i).
  bool is_diagonal() const noexcept;

  /// Canonical index obtained by replacing one occurrence of `from` with `to`.
  /// `from` must occur in the index.
  MultiIndex replace_one(int from, int to) const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> idx_;
};

/// Number of nondecreasing k-tuples over d labels, binom(d+k-1, k).
std::size_t num_unique(int d, int k);

/// All canonical multi-indices of order k over d labels, lexicographic.
std::vector<MultiIndex> unique_indices(int d, int k);

/// Position of a canonical multi-index in unique_indices(d, k).
std::size_t unique_rank(const MultiIndex& idx, int d);

/// Dense tensor with arbitrary mode sizes, stored column-major (first index
/// varies fastest), so that `data()` is vec(T).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<int> dims, double fill = 0.0);

  const std::vector<int>& dims() const noexcept { return dims_; }
  int order() const noexcept { return static_cast<int>(dims_.size()); }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::span<const int> idx) { return data_[flat(idx)]; }
  double operator()(std::span<const int> idx) const { return data_[flat(idx)]; }
  double& at_flat(std::size_t i) { return data_[i]; }
  double at_flat(std::size_t i) const { return data_[i]; }

  std::size_t flat(std::span<const int> idx) const;
  std::vector<int> unflat(std::size_t i) const;

  const std::vector<double>& data() const noexcept { return data_; }
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  DenseTensor& operator+=(const DenseTensor& other);
  double max_abs() const;

  /// True if every mode has the same size and entries are permutation
  /// invariant up to `tol`.
  bool is_symmetric(double tol = 0.0) const;

 private:
  std::vector<int> dims_;
  std::vector<double> data_;
};

/// n-mode (Tucker) product T x_n M with a 1-based mode `n`:
/// (T x_n M)_{..j..} = sum_i T_{..i..} M_{j i}.
DenseTensor n_mode_product(const DenseTensor& t, const Eigen::MatrixXd& m,
                           int n);

/// Order-k symmetric tensor over R^d, storing only the unique entries in the
/// order of unique_indices(d, k).
class SymmetricTensor {
 public:
  SymmetricTensor() = default;
  SymmetricTensor(int d, int k);

  static SymmetricTensor from_vec_u(int d, int k, const Eigen::VectorXd& v);
  static SymmetricTensor diagonal(int k, const Eigen::VectorXd& diag);
  static SymmetricTensor from_matrix(const Eigen::MatrixXd& m);
  /// Reads canonical entries of a dense tensor; throws unless symmetric
  /// to `tol` (relative to its largest entry).
  static SymmetricTensor from_dense(const DenseTensor& t, double tol = 1e-9);

  int dim() const noexcept { return d_; }
  int order() const noexcept { return k_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Lookup under any permutation of the index.
  double get(std::span<const int> idx) const;
  double get(const MultiIndex& idx) const;
  void set(std::span<const int> idx, double value);

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  /// Unique entries, each once, unweighted.
  Eigen::VectorXd vec_u() const;
  DenseTensor to_dense() const;
  /// Only for order 2.
  Eigen::MatrixXd to_matrix() const;

 private:
  int d_ = 0;
  int k_ = 0;
  std::vector<double> values_;
};

inline Eigen::VectorXd vec_u(const SymmetricTensor& t) { return t.vec_u(); }

}  // namespace clyap
