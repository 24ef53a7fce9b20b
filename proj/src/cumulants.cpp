#include "clyap/cumulants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "clyap/error.hpp"

namespace clyap {

void SampleBatch::validate() const {
  if (rows.rows() < 1 || rows.cols() < 1) throw InvalidArgument("sample is empty");
  if (!rows.allFinite()) throw InvalidArgument("sample has non-finite entries");
}

MomentTable::MomentTable(int d, int max_order) : d_(d) {
  if (d < 1 || max_order < 1) throw InvalidArgument("MomentTable: need d >= 1, order >= 1");
  for (int k = 1; k <= max_order; ++k) tables_.emplace_back(num_unique(d, k), 0.0);
}

std::vector<double>& MomentTable::order(int k) {
  if (k < 1 || k > max_order()) throw InvalidArgument("moment of order " + std::to_string(k) + " missing");
  return tables_[static_cast<std::size_t>(k - 1)];
}

const std::vector<double>& MomentTable::order(int k) const {
  if (k < 1 || k > max_order()) throw InvalidArgument("moment of order " + std::to_string(k) + " missing");
  return tables_[static_cast<std::size_t>(k - 1)];
}

double MomentTable::get(const MultiIndex& idx) const { return order(idx.order())[unique_rank(idx, d_)]; }

namespace {

constexpr int kMaxOrder = 6;

using Partition = std::vector<std::vector<int>>;

// All set partitions of {0..k-1} via restricted growth strings.
std::vector<Partition> make_partitions(int k) {
  std::vector<Partition> out;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  while (true) {
    const int blocks = *std::max_element(a.begin(), a.end()) + 1;
    Partition p(static_cast<std::size_t>(blocks));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(i);
    out.push_back(std::move(p));
    int i = k - 1;
    for (; i > 0; --i) {
      const int prefix_max = *std::max_element(a.begin(), a.begin() + i);
      if (a[static_cast<std::size_t>(i)] <= prefix_max) {
        ++a[static_cast<std::size_t>(i)];
        std::fill(a.begin() + i + 1, a.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

const std::vector<Partition>& partitions(int k) {
  static const auto table = [] {
    std::array<std::vector<Partition>, kMaxOrder + 1> t;
    for (int j = 1; j <= kMaxOrder; ++j) t[static_cast<std::size_t>(j)] = make_partitions(j);
    return t;
  }();
  if (k < 1 || k > kMaxOrder) throw InvalidArgument("cumulant order must be in 1..6");
  return table[static_cast<std::size_t>(k)];
}

// (-1)^(b-1) (b-1)!
double mobius_weight(std::size_t blocks) {
  double w = 1.0;
  for (std::size_t j = 1; j < blocks; ++j) w *= -static_cast<double>(j);
  return w;
}

MultiIndex sub_index(const MultiIndex& idx, const std::vector<int>& block) {
  std::vector<int> v;
  v.reserve(block.size());
  for (int p : block) v.push_back(idx[static_cast<std::size_t>(p)]);
  return MultiIndex(std::move(v));
}

// Layout of the monomial features of orders 1..K: each feature is its
// parent (last label dropped) times one coordinate.
struct FeatureLayout {
  int d = 0;
  int max_order = 0;
  std::vector<std::size_t> offset;  // offset[k] = first feature of order k
  std::vector<std::size_t> parent;  // global index of the parent, unused at order 1
  std::vector<int> last;
  std::size_t size = 0;

  FeatureLayout(int dim, int k) : d(dim), max_order(k), offset(static_cast<std::size_t>(k) + 2, 0) {
    for (int j = 1; j <= k; ++j) {
      offset[static_cast<std::size_t>(j)] = size;
      for (const auto& idx : unique_indices(d, j)) {
        last.push_back(idx[static_cast<std::size_t>(j - 1)]);
        if (j == 1) {
          parent.push_back(0);
        } else {
          std::vector<int> head(idx.begin(), idx.end() - 1);
          parent.push_back(offset[static_cast<std::size_t>(j - 1)] + unique_rank(MultiIndex(head), d));
        }
      }
      size += num_unique(d, j);
    }
    offset[static_cast<std::size_t>(k) + 1] = size;
  }

  std::size_t global(const MultiIndex& idx) const {
    return offset[static_cast<std::size_t>(idx.order())] + unique_rank(idx, d);
  }

  // Feature matrix for a block of rows.
  Eigen::MatrixXd features(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    Eigen::MatrixXd f(x.rows(), static_cast<Eigen::Index>(size));
    for (std::size_t c = 0; c < size; ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      if (c < offset[2]) {
        f.col(col) = x.col(last[c]);
      } else {
        f.col(col) = f.col(static_cast<Eigen::Index>(parent[c])).cwiseProduct(x.col(last[c]));
      }
    }
    return f;
  }
};

constexpr Eigen::Index kChunk = 4096;

Eigen::VectorXd feature_means(const FeatureLayout& layout, const Eigen::MatrixXd& x) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size));
  for (Eigen::Index s = 0; s < x.rows(); s += kChunk) {
    const Eigen::Index len = std::min(kChunk, x.rows() - s);
    sum += layout.features(x.middleRows(s, len)).colwise().sum().transpose();
  }
  return sum / static_cast<double>(x.rows());
}

MomentTable table_from_means(const FeatureLayout& layout, const Eigen::VectorXd& means) {
  MomentTable t(layout.d, layout.max_order);
  for (int k = 1; k <= layout.max_order; ++k) {
    auto& v = t.order(k);
    const std::size_t off = layout.offset[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = means(static_cast<Eigen::Index>(off + i));
  }
  return t;
}

double cumulant_entry(const MomentTable& m, const MultiIndex& idx) {
  double total = 0.0;
  for (const auto& part : partitions(idx.order())) {
    double term = mobius_weight(part.size());
    for (const auto& block : part) term *= m.get(sub_index(idx, block));
    total += term;
  }
  return total;
}

}  // namespace

MomentTable raw_moments(const SampleBatch& sample, int max_order) {
  sample.validate();
  if (max_order < 1 || max_order > 2 * kMaxOrder) throw InvalidArgument("raw_moments: order out of range");
  const FeatureLayout layout(sample.d(), max_order);
  return table_from_means(layout, feature_means(layout, sample.rows));
}

SymmetricTensor moments_to_cumulants(const MomentTable& moments, int k) {
  if (k > moments.max_order()) throw InvalidArgument("moments_to_cumulants: moment of order " + std::to_string(k) + " missing");
  SymmetricTensor out(moments.dim(), k);
  const auto idxs = unique_indices(moments.dim(), k);
  for (std::size_t r = 0; r < idxs.size(); ++r) out.values()[r] = cumulant_entry(moments, idxs[r]);
  return out;
}

MomentTable all_cumulants(const MomentTable& moments, int max_order) {
  MomentTable out(moments.dim(), max_order);
  for (int k = 1; k <= max_order; ++k) out.order(k) = moments_to_cumulants(moments, k).values();
  return out;
}

SymmetricTensor cumulants_to_moments(const MomentTable& cumulants, int k) {
  if (k > cumulants.max_order()) throw InvalidArgument("cumulants_to_moments: cumulant order missing");
  SymmetricTensor out(cumulants.dim(), k);
  const auto idxs = unique_indices(cumulants.dim(), k);
  for (std::size_t r = 0; r < idxs.size(); ++r) {
    double total = 0.0;
    for (const auto& part : partitions(k)) {
      double term = 1.0;
      for (const auto& block : part) term *= cumulants.get(sub_index(idxs[r], block));
      total += term;
    }
    out.values()[r] = total;
  }
  return out;
}

// ----------------------------------------------------------- CumulantVector

std::size_t CumulantVector::offset(int order) const {
  std::size_t off = 0;
  for (int k : orders) {
    if (k == order) return off;
    off += num_unique(d, k);
  }
  throw InvalidArgument("CumulantVector: order " + std::to_string(order) + " not present");
}

SymmetricTensor CumulantVector::block(int order) const {
  const auto off = static_cast<Eigen::Index>(offset(order));
  const auto len = static_cast<Eigen::Index>(num_unique(d, order));
  return SymmetricTensor::from_vec_u(d, order, values.segment(off, len));
}

CumulantVector CumulantVector::from_tensors(const std::vector<SymmetricTensor>& tensors) {
  CumulantVector cv;
  if (tensors.empty()) return cv;
  cv.d = tensors.front().dim();
  Eigen::Index total = 0;
  for (const auto& t : tensors) {
    if (t.dim() != cv.d) throw InvalidArgument("CumulantVector: inconsistent dimensions");
    cv.orders.push_back(t.order());
    total += static_cast<Eigen::Index>(t.size());
  }
  cv.values.resize(total);
  Eigen::Index pos = 0;
  for (const auto& t : tensors) {
    cv.values.segment(pos, static_cast<Eigen::Index>(t.size())) = t.vec_u();
    pos += static_cast<Eigen::Index>(t.size());
  }
  return cv;
}

std::vector<int> normalize_orders(std::vector<int> orders) {
  std::sort(orders.begin(), orders.end());
  if (orders.empty()) throw InvalidArgument("at least one cumulant order is required");
  if (std::adjacent_find(orders.begin(), orders.end()) != orders.end()) {
    throw InvalidArgument("cumulant orders must be distinct");
  }
  if (orders.front() < 2 || orders.back() > kMaxOrder) {
    throw InvalidArgument("cumulant orders must lie in 2..6");
  }
  return orders;
}

CumulantVector empirical_cumulants(const SampleBatch& sample, const std::vector<int>& orders) {
  const auto ords = normalize_orders(orders);
  if (sample.n() < 2) throw InvalidArgument("empirical_cumulants: need at least 2 observations");
  const auto moments = raw_moments(sample, ords.back());
  std::vector<SymmetricTensor> blocks;
  for (int k : ords) blocks.push_back(moments_to_cumulants(moments, k));
  return CumulantVector::from_tensors(blocks);
}

Eigen::MatrixXd estimate_omega(const SampleBatch& sample, const std::vector<int>& orders) {
  const auto ords = normalize_orders(orders);
  sample.validate();
  const int d = sample.d();
  const int kmax = ords.back();
  const FeatureLayout layout(d, kmax);
  const auto nf = static_cast<Eigen::Index>(layout.size);
  if (sample.n() < nf) {
    throw InvalidArgument("estimate_omega: n=" + std::to_string(sample.n()) +
                          " is below the number of moments (" + std::to_string(nf) + ")");
  }
  // Cumulants of order >= 2 are shift invariant; centring keeps the
  // monomials well scaled without changing the statistic.
  const Eigen::RowVectorXd mean = sample.rows.colwise().mean();
  const Eigen::MatrixXd x = sample.rows.rowwise() - mean;

  const Eigen::VectorXd m = feature_means(layout, x);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(nf, nf);
  for (Eigen::Index s = 0; s < x.rows(); s += kChunk) {
    const Eigen::Index len = std::min(kChunk, x.rows() - s);
    Eigen::MatrixXd f = layout.features(x.middleRows(s, len));
    f.rowwise() -= m.transpose();
    cov.selfadjointView<Eigen::Lower>().rankUpdate(f.transpose());
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(x.rows());

  const MomentTable table = table_from_means(layout, m);
  Eigen::Index rows = 0;
  for (int k : ords) rows += static_cast<Eigen::Index>(num_unique(d, k));
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows, nf);
  Eigen::Index row = 0;
  for (int k : ords) {
    for (const auto& idx : unique_indices(d, k)) {
      for (const auto& part : partitions(k)) {
        const double w = mobius_weight(part.size());
        std::vector<MultiIndex> subs;
        subs.reserve(part.size());
        for (const auto& block : part) subs.push_back(sub_index(idx, block));
        for (std::size_t b = 0; b < subs.size(); ++b) {
          double g = w;
          for (std::size_t o = 0; o < subs.size(); ++o) {
            if (o != b) g *= table.get(subs[o]);
          }
          jac(row, static_cast<Eigen::Index>(layout.global(subs[b]))) += g;
        }
      }
      ++row;
    }
  }
  Eigen::MatrixXd omega = jac * cov * jac.transpose();
  return 0.5 * (omega + omega.transpose());
}

Eigen::MatrixXd bootstrap_omega(const SampleBatch& sample, const std::vector<int>& orders,
                                int resamples, std::uint64_t seed) {
  if (resamples < 2) throw InvalidArgument("bootstrap_omega: need at least 2 resamples");
  sample.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, sample.rows.rows() - 1);
  std::vector<Eigen::VectorXd> stats;
  SampleBatch boot{Eigen::MatrixXd(sample.rows.rows(), sample.rows.cols())};
  for (int b = 0; b < resamples; ++b) {
    for (Eigen::Index i = 0; i < boot.rows.rows(); ++i) boot.rows.row(i) = sample.rows.row(pick(rng));
    stats.push_back(empirical_cumulants(boot, orders).values);
  }
  const Eigen::Index p = stats.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const auto& s : stats) mean += s;
  mean /= static_cast<double>(resamples);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (const auto& s : stats) cov += (s - mean) * (s - mean).transpose();
  return cov * (static_cast<double>(sample.n()) / static_cast<double>(resamples - 1));
}

// ---------------------------------------------------------------- jump laws

void validate_jump(const JumpDistribution& jump) {
  if (const auto* b = std::get_if<BetaJump>(&jump)) {
    if (!(b->mu > 0.0 && b->mu < 1.0) || !(b->nu > 0.0)) {
      throw InvalidArgument("beta jump needs mu in (0,1) and nu > 0");
    }
  } else if (const auto* t = std::get_if<TwoPointJump>(&jump)) {
    if (!(t->p > 0.0 && t->p <= 1.0) || !std::isfinite(t->a) || !std::isfinite(t->b)) {
      throw InvalidArgument("two-point jump needs p in (0,1] and finite support");
    }
  } else if (!std::isfinite(std::get<ConstantJump>(jump).c)) {
    throw InvalidArgument("constant jump must be finite");
  }
}

double beta_raw_moment(double mu, double nu, int k) {
  if (!(mu > 0.0 && mu < 1.0) || !(nu > 0.0) || k < 0) {
    throw InvalidArgument("beta_raw_moment: need mu in (0,1), nu > 0, k >= 0");
  }
  double m = 1.0;
  for (int r = 0; r < k; ++r) m *= (mu * nu + r) / (nu + r);
  return m;
}

double jump_raw_moment(const JumpDistribution& jump, int k) {
  validate_jump(jump);
  if (const auto* b = std::get_if<BetaJump>(&jump)) return beta_raw_moment(b->mu, b->nu, k);
  if (const auto* t = std::get_if<TwoPointJump>(&jump)) {
    return t->p * std::pow(t->a, k) + (1.0 - t->p) * std::pow(t->b, k);
  }
  return std::pow(std::get<ConstantJump>(jump).c, k);
}

Eigen::VectorXd compound_poisson_cumulants(const Eigen::VectorXd& lambdas,
                                           const std::vector<JumpDistribution>& jumps, int k) {
  if (static_cast<std::size_t>(lambdas.size()) != jumps.size()) {
    throw InvalidArgument("compound_poisson_cumulants: one jump law per rate");
  }
  if ((lambdas.array() <= 0.0).any()) throw InvalidArgument("rates must be positive");
  Eigen::VectorXd out(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    out(i) = lambdas(i) * jump_raw_moment(jumps[static_cast<std::size_t>(i)], k);
  }
  return out;
}

}  // namespace clyap
