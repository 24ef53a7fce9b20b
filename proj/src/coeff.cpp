#include "clyap/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clyap/error.hpp"
#include "clyap/parallel.hpp"

namespace clyap {

Eigen::VectorXd CoefficientSystem::edge_vector(const Eigen::MatrixXd& m) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(col_labels.size()));
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    v(static_cast<Eigen::Index>(c)) = m(col_labels[c].to, col_labels[c].from);
  }
  return v;
}

Eigen::MatrixXd CoefficientSystem::to_matrix(const Eigen::VectorXd& v, int d) const {
  if (static_cast<std::size_t>(v.size()) != col_labels.size()) {
    throw InvalidArgument("to_matrix: vector length does not match the columns");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    m(col_labels[c].to, col_labels[c].from) = v(static_cast<Eigen::Index>(c));
  }
  return m;
}

Eigen::VectorXd CoefficientSystem::constant_term(const std::vector<SymmetricTensor>& c) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(row_labels.size()));
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    const auto it = std::find_if(c.begin(), c.end(), [&](const SymmetricTensor& t) {
      return t.order() == row_labels[i].order;
    });
    if (it == c.end()) throw InvalidArgument("constant_term: no tensor of order " + std::to_string(row_labels[i].order));
    out(static_cast<Eigen::Index>(i)) = it->get(row_labels[i].index);
  }
  return out;
}

RowPolicy parse_row_policy(const std::string& name) {
  if (name == "all" || name == "ALL") return RowPolicy::kAll;
  if (name == "off_diagonal" || name == "OFF_DIAGONAL") return RowPolicy::kOffDiagonal;
  if (name == "theorem_rows" || name == "THEOREM_ROWS") return RowPolicy::kTheoremRows;
  throw InvalidArgument("unknown row policy '" + name + "'");
}

std::string to_string(RowPolicy policy) {
  switch (policy) {
    case RowPolicy::kAll: return "ALL";
    case RowPolicy::kOffDiagonal: return "OFF_DIAGONAL";
    case RowPolicy::kTheoremRows: return "THEOREM_ROWS";
  }
  return "?";
}

std::vector<Edge> all_edges(int d) {
  std::vector<Edge> out;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) out.push_back({a, b});
  }
  return out;
}

namespace {

// Calls f(column a*d+b, multiplicity, replaced index) for every nonzero
// pattern position of row idx.
template <class F>
void for_each_entry(const MultiIndex& idx, int d, F&& f) {
  int prev = -1;
  for (int b : idx) {
    if (b == prev) continue;
    prev = b;
    const int mult = idx.multiplicity(b);
    for (int a = 0; a < d; ++a) f(a * d + b, mult, idx.replace_one(b, a));
  }
}

bool keep_row(const MultiIndex& idx, RowPolicy policy, const std::vector<int>& position,
              const DirectedGraph* tree) {
  switch (policy) {
    case RowPolicy::kAll: return true;
    case RowPolicy::kOffDiagonal: return !idx.is_diagonal();
    case RowPolicy::kTheoremRows: {
      if (idx.is_diagonal()) return false;
      const int k = idx.order();
      if (k == 2) return true;
      const int lo = idx[0];
      const int hi = idx[static_cast<std::size_t>(k - 1)];
      const int mlo = idx.multiplicity(lo);
      const int mhi = idx.multiplicity(hi);
      if (mlo + mhi != k) return false;
      // (i j..j) with i before j
      if (mlo == 1 && position[static_cast<std::size_t>(lo)] < position[static_cast<std::size_t>(hi)]) return true;
      if (mhi == 1 && position[static_cast<std::size_t>(hi)] < position[static_cast<std::size_t>(lo)]) return true;
      // (i..i j) for a tree edge i -> j
      if (mhi == 1 && tree->has_edge(lo, hi)) return true;
      if (mlo == 1 && tree->has_edge(hi, lo)) return true;
      return false;
    }
  }
  return false;
}

}  // namespace

CoefficientSystem build_A_k(const SymmetricTensor& t) {
  const int d = t.dim();
  const auto rows = unique_indices(d, t.order());
  CoefficientSystem sys;
  sys.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d * d);
  sys.col_labels = all_edges(d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sys.row_labels.push_back({t.order(), rows[r]});
    for_each_entry(rows[r], d, [&](int col, int mult, const MultiIndex& rep) {
      sys.matrix(static_cast<Eigen::Index>(r), col) += mult * t.get(rep);
    });
  }
  return sys;
}

CoefficientSystem assemble_system(const std::vector<SymmetricTensor>& tensors, RowPolicy rows,
                                  const std::optional<DirectedGraph>& columns,
                                  const std::optional<DirectedGraph>& polytree) {
  if (tensors.empty()) throw InvalidArgument("assemble_system: no tensors");
  const int d = tensors.front().dim();
  for (const auto& t : tensors) {
    if (t.dim() != d) throw InvalidArgument("assemble_system: tensors disagree on d");
  }
  std::vector<int> position(static_cast<std::size_t>(d), 0);
  if (rows == RowPolicy::kTheoremRows) {
    if (!polytree) throw InvalidArgument("assemble_system: THEOREM_ROWS needs a polytree");
    if (polytree->num_nodes() != d || !is_polytree(*polytree)) {
      throw NotAPolytree("assemble_system: THEOREM_ROWS needs a polytree on d nodes");
    }
    const auto order = topological_order(*polytree);
    for (std::size_t p = 0; p < order.size(); ++p) position[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  }
  if (columns && columns->num_nodes() != d) throw InvalidArgument("assemble_system: column graph size mismatch");

  std::vector<int> col_index;
  CoefficientSystem out;
  for (const auto& e : all_edges(d)) {
    if (!columns || columns->has_edge(e.from, e.to)) {
      col_index.push_back(e.from * d + e.to);
      out.col_labels.push_back(e);
    }
  }
  std::vector<Eigen::RowVectorXd> kept;
  const DirectedGraph* tree = polytree ? &*polytree : nullptr;
  for (const auto& t : tensors) {
    const auto full = build_A_k(t);
    for (std::size_t r = 0; r < full.row_labels.size(); ++r) {
      if (!keep_row(full.row_labels[r].index, rows, position, tree)) continue;
      Eigen::RowVectorXd row(static_cast<Eigen::Index>(col_index.size()));
      for (std::size_t c = 0; c < col_index.size(); ++c) {
        row(static_cast<Eigen::Index>(c)) = full.matrix(static_cast<Eigen::Index>(r), col_index[c]);
      }
      kept.push_back(std::move(row));
      out.row_labels.push_back(full.row_labels[r]);
    }
  }
  out.matrix.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(col_index.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) out.matrix.row(static_cast<Eigen::Index>(r)) = kept[r];
  return out;
}

double default_rank_rtol(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * 1e3;
}

int numerical_rank(const Eigen::MatrixXd& a, double rtol) {
  if (!(rtol > 0.0)) throw InvalidArgument("numerical_rank: rtol must be positive");
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rtol * s(0)).count());
}

int numerical_rank(const Eigen::MatrixXd& a) {
  const Eigen::Index sq = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(a.cols()))));
  return numerical_rank(a, default_rank_rtol(a.rows(), sq * sq));
}

ModelParameters random_parameters(const DirectedGraph& g, int r, std::mt19937_64& rng, int max_attempts) {
  const int d = g.num_nodes();
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::bernoulli_distribution flip(0.5);
  ModelParameters theta;
  theta.r = r;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    theta.m = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : g.edges()) {
      theta.m(e.to, e.from) = weight(rng) - (e.is_loop() ? 2.0 * d : 0.0);
    }
    if (is_stable(theta.m)) {
      theta.c2.resize(d);
      theta.cr.resize(d);
      for (int i = 0; i < d; ++i) theta.c2(i) = scale(rng);
      for (int i = 0; i < d; ++i) theta.cr(i) = (flip(rng) ? -1.0 : 1.0) * scale(rng);
      return theta;
    }
  }
  throw NonStable("random_parameters: no stable draw for this graph");
}

IdentifiabilityReport generic_identifiability_check(const DirectedGraph& g, int r, int trials,
                                                    std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (r < 3) throw InvalidArgument("r must be >= 3");
  const int d = g.num_nodes();
  IdentifiabilityReport rep;
  rep.graph = g;
  rep.r = r;
  rep.trials = trials;
  rep.components = static_cast<int>(connected_components(g).size());
  rep.expected_rank = d * d - rep.components;
  if (!g.has_all_self_loops()) {
    rep.warnings.push_back("graph is missing self-loops; the generic rank result does not cover it");
  }
  rep.ranks.assign(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    const auto theta = random_parameters(g, r, rng);
    const auto cum = forward_map(theta);
    const auto sys = assemble_system({cum.sigma, cum.kappa}, RowPolicy::kOffDiagonal);
    rep.ranks[t] = numerical_rank(sys.matrix, default_rank_rtol(sys.rows(), d * d));
  });
  rep.max_rank = *std::max_element(rep.ranks.begin(), rep.ranks.end());
  rep.hits = static_cast<int>(std::count(rep.ranks.begin(), rep.ranks.end(), rep.expected_rank));
  if (rep.max_rank == rep.expected_rank) {
    rep.verdict = "IDENTIFIABLE_UP_TO_SCALING";
    if (rep.components > 1) {
      rep.warnings.push_back("kernel has dimension " + std::to_string(rep.components) +
                             ": M is determined up to one scale per connected component");
    }
  } else {
    rep.verdict = "RANK_DEFICIENT";
  }
  return rep;
}

CoefficientSystem known_cr_system(const SymmetricTensor& kappa, const DirectedGraph& g) {
  const int d = kappa.dim();
  const int r = kappa.order();
  if (g.num_nodes() != d) throw InvalidArgument("known_cr_system: graph size mismatch");
  if (r < 2) throw InvalidArgument("known_cr_system: order must be >= 2");
  CoefficientSystem sys;
  sys.col_labels.assign(g.edges().begin(), g.edges().end());
  const auto n = static_cast<Eigen::Index>(sys.col_labels.size());
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> col_of(static_cast<std::size_t>(d * d), -1);
  for (std::size_t c = 0; c < sys.col_labels.size(); ++c) {
    col_of[static_cast<std::size_t>(sys.col_labels[c].from * d + sys.col_labels[c].to)] = static_cast<int>(c);
  }
  for (std::size_t row = 0; row < sys.col_labels.size(); ++row) {
    const auto& e = sys.col_labels[row];
    std::vector<int> idx(static_cast<std::size_t>(r - 1), e.from);
    idx.push_back(e.to);
    const MultiIndex mi(idx);
    sys.row_labels.push_back({r, mi});
    for_each_entry(mi, d, [&](int col, int mult, const MultiIndex& rep) {
      const int c = col_of[static_cast<std::size_t>(col)];
      if (c >= 0) sys.matrix(static_cast<Eigen::Index>(row), c) += mult * kappa.get(rep);
    });
  }
  return sys;
}

KnownCrReport known_cr_identifiability_check(const DirectedGraph& g, int r, int trials, std::uint64_t seed) {
  if (!g.has_all_self_loops()) throw InvalidArgument("known_cr_identifiability_check: all self-loops required");
  if (r < 3) throw InvalidArgument("r must be >= 3");
  const int d = g.num_nodes();
  KnownCrReport rep;
  rep.graph = g;
  rep.r = r;
  rep.size = static_cast<int>(g.num_edges());

  Eigen::VectorXd diag(d);
  Eigen::VectorXd cr(d);
  for (int i = 0; i < d; ++i) {
    diag(i) = -(1.0 + 0.5 * i);
    cr(i) = 1.0 + 0.25 * i;
  }
  const Eigen::MatrixXd m = diag.asDiagonal();
  const auto kappa = solve_lyapunov(m, SymmetricTensor::diagonal(r, cr));
  const auto sys = known_cr_system(kappa, g);
  rep.rank_at_diagonal = numerical_rank(sys.matrix, default_rank_rtol(sys.rows(), sys.cols()));
  rep.det_at_diagonal = sys.matrix.determinant();
  rep.det_product_formula = 1.0;
  for (const auto& e : g.edges()) {
    const double kii = kappa.get(std::vector<int>(static_cast<std::size_t>(r), e.from));
    rep.det_product_formula *= e.is_loop() ? r * kii : kii;
  }
  rep.random_ranks.assign(static_cast<std::size_t>(std::max(trials, 0)), 0);
  parallel_for(rep.random_ranks.size(), [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    const auto theta = random_parameters(g, r, rng);
    const auto k = solve_lyapunov(theta.m, SymmetricTensor::diagonal(r, theta.cr));
    const auto s = known_cr_system(k, g);
    rep.random_ranks[t] = numerical_rank(s.matrix, default_rank_rtol(s.rows(), s.cols()));
  });
  rep.identifiable = rep.rank_at_diagonal == rep.size;
  return rep;
}

// ------------------------------------------------------ exact combinatorics

namespace {

cpp_int binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  cpp_int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

cpp_rational rpow(const cpp_rational& base, int e) {
  cpp_rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

void check_forsum_domain(int d, int q, int r) {
  if (d < 1 || q < 0 || q > d - 1 || r < 3) {
    throw InvalidArgument("forsum: need d >= 1, 0 <= q <= d-1, r >= 3");
  }
}

}  // namespace

cpp_int forsum_coefficient(int d, int q, int i, int r) {
  check_forsum_domain(d, q, r);
  if (i < 0) throw InvalidArgument("forsum_coefficient: i must be >= 0");
  cpp_int total = 0;
  cpp_int power = 1;
  for (int j = 0; j <= i; ++j) {
    total += power * binom(q, j) * binom(d - 1 - q, i - j);
    power *= (r - 1);
  }
  return total;
}

cpp_rational forsum_lhs(int d, int q, int r) {
  check_forsum_domain(d, q, r);
  const cpp_rational half_r(r, 2);
  cpp_rational total = 0;
  for (int i = 0; i <= d - 1; ++i) {
    const cpp_rational term = rpow(half_r, d - 1 - i) * cpp_rational(forsum_coefficient(d, q, i, r));
    total += (i % 2 == 0) ? term : cpp_rational(-term);
  }
  return total;
}

cpp_rational forsum_rhs(int d, int q, int r) {
  check_forsum_domain(d, q, r);
  const cpp_rational v = rpow(cpp_rational(r, 2) - 1, d - 1);
  return q % 2 == 0 ? v : cpp_rational(-v);
}

bool forsum_identity_check(int d, int q, int r) { return forsum_lhs(d, q, r) == forsum_rhs(d, q, r); }

// ------------------------------------------------------- rank certificate

namespace {

void trim(RationalPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b) {
  if (a.empty() || b.empty()) return {};
  RationalPoly out(a.size() + b.size() - 1, cpp_rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

RationalPoly poly_sub(RationalPoly a, const RationalPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), cpp_rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Exact division; the remainder must vanish.
RationalPoly poly_div(RationalPoly num, const RationalPoly& den) {
  if (den.empty()) throw InvalidArgument("polynomial division by zero");
  if (num.empty()) return {};
  if (num.size() < den.size()) throw Error("inexact polynomial division");
  RationalPoly q(num.size() - den.size() + 1, cpp_rational(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    const cpp_rational c = num[k + den.size() - 1] / den.back();
    q[k] = c;
    for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
  }
  trim(num);
  if (!num.empty()) throw Error("inexact polynomial division");
  trim(q);
  return q;
}

// Fraction-free (Bareiss) determinant over Q[zeta].
RationalPoly poly_det(std::vector<std::vector<RationalPoly>> a) {
  const std::size_t n = a.size();
  if (n == 0) return {cpp_rational(1)};
  bool negate = false;
  RationalPoly prev{cpp_rational(1)};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].empty()) {
      std::size_t p = k + 1;
      while (p < n && a[p][k].empty()) ++p;
      if (p == n) return {};
      std::swap(a[k], a[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = poly_div(poly_sub(poly_mul(a[k][k], a[i][j]), poly_mul(a[i][k], a[k][j])), prev);
      }
      a[i][k].clear();
    }
    prev = a[k][k];
  }
  RationalPoly det = a[n - 1][n - 1];
  if (negate) {
    for (auto& c : det) c = -c;
  }
  return det;
}

// Trek-rule entries as exact polynomials in zeta.
RationalPoly sigma_poly(const DirectedGraph& tree, int i, int j, int r) {
  RationalPoly p;
  const cpp_rational half_r(r, 2);
  for (const auto& trek : enumerate_treks(tree, {i, j})) {
    const int l1 = trek.length(0);
    const int l2 = trek.length(1);
    const auto e = static_cast<std::size_t>(l1 + l2 + 1);
    if (p.size() <= e) p.resize(e + 1, cpp_rational(0));
    p[e] += rpow(half_r, l1 + l2 + 1) * cpp_rational(binom(l1 + l2, l1));
  }
  trim(p);
  return p;
}

RationalPoly kappa_poly(const DirectedGraph& tree, const std::vector<int>& idx) {
  RationalPoly p;
  for (const auto& trek : enumerate_treks(tree, idx)) {
    const int total = trek.total_length();
    cpp_int coef = 1;
    int remaining = total;
    for (std::size_t j = 0; j < trek.walks.size(); ++j) {
      coef *= binom(remaining, trek.length(j));
      remaining -= trek.length(j);
    }
    const auto e = static_cast<std::size_t>(total + 1);
    if (p.size() <= e) p.resize(e + 1, cpp_rational(0));
    p[e] += cpp_rational(coef);
  }
  trim(p);
  return p;
}

double witness_det(const CoefficientSystem& sys) { return sys.matrix.partialPivLu().determinant(); }

CoefficientSystem witness_system(const DirectedGraph& tree, const Edge& omitted, int r, double zeta) {
  const auto cum = trek_closed_form(tree, zeta, r);
  auto sys = assemble_system({cum.sigma, cum.kappa}, RowPolicy::kTheoremRows, std::nullopt, tree);
  const int d = tree.num_nodes();
  const int drop = omitted.from * d + omitted.to;
  CoefficientSystem out;
  out.row_labels = sys.row_labels;
  out.matrix.resize(sys.rows(), sys.cols() - 1);
  Eigen::Index c = 0;
  for (Eigen::Index j = 0; j < sys.cols(); ++j) {
    if (j == drop) continue;
    out.matrix.col(c++) = sys.matrix.col(j);
    out.col_labels.push_back(sys.col_labels[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace

Theorem1Witness theorem1_witness(const DirectedGraph& g, int r, double zeta, bool exact_determinant) {
  if (r < 3) throw InvalidArgument("r must be >= 3");
  Theorem1Witness w;
  w.zeta = zeta;
  w.polytree = spanning_polytree(g);
  w.topological_order = topological_order(w.polytree);
  const int first = w.topological_order.front();
  w.omitted_column = {first, first};
  w.system = witness_system(w.polytree, w.omitted_column, r, zeta);
  const int d = g.num_nodes();
  w.rank = numerical_rank(w.system.matrix, default_rank_rtol(w.system.rows(), d * d));

  const double half_r = r / 2.0;
  w.expected_lowest_degree = (d - 1) * (d + 2);
  w.expected_lowest_magnitude = std::pow(half_r, d - 1) * std::pow(half_r - 1.0, d - 1) *
                                std::pow(half_r, d * (d - 1) / 2 - (d - 1));
  if (!exact_determinant) return w;

  std::vector<std::vector<RationalPoly>> entries;
  for (const auto& label : w.system.row_labels) {
    std::vector<RationalPoly> row(w.system.col_labels.size());
    const auto& idx = label.index;
    for_each_entry(idx, d, [&](int col, int mult, const MultiIndex& rep) {
      const Edge e{col / d, col % d};
      const auto it = std::find(w.system.col_labels.begin(), w.system.col_labels.end(), e);
      if (it == w.system.col_labels.end()) return;
      RationalPoly p = label.order == 2 ? sigma_poly(w.polytree, rep[0], rep[1], r)
                                        : kappa_poly(w.polytree, rep.indices());
      for (auto& c : p) c *= mult;
      auto& slot = row[static_cast<std::size_t>(it - w.system.col_labels.begin())];
      if (slot.size() < p.size()) slot.resize(p.size(), cpp_rational(0));
      for (std::size_t i = 0; i < p.size(); ++i) slot[i] += p[i];
      trim(slot);
    });
    entries.push_back(std::move(row));
  }
  w.determinant = poly_det(std::move(entries));
  const auto& det = *w.determinant;
  for (std::size_t i = 0; i < det.size(); ++i) {
    if (det[i] != 0) {
      w.lowest_degree = static_cast<int>(i);
      w.lowest_coefficient = static_cast<double>(det[i]);
      break;
    }
  }
  w.lowest_term_matches =
      w.lowest_degree == w.expected_lowest_degree &&
      std::abs(std::abs(w.lowest_coefficient) - w.expected_lowest_magnitude) <= 1e-12 * w.expected_lowest_magnitude;
  return w;
}

std::vector<double> interpolate_witness_determinant(const DirectedGraph& g, int r,
                                                    const std::vector<double>& zetas) {
  if (zetas.empty()) throw InvalidArgument("interpolate_witness_determinant: no sample points");
  const auto tree = spanning_polytree(g);
  const int first = topological_order(tree).front();
  const auto n = static_cast<Eigen::Index>(zetas.size());
  Eigen::MatrixXd vander(n, n);
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = zetas[static_cast<std::size_t>(i)];
    double p = 1.0;
    for (Eigen::Index j = 0; j < n; ++j, p *= z) vander(i, j) = p;
    values(i) = witness_det(witness_system(tree, {first, first}, r, z));
  }
  const Eigen::VectorXd coef = vander.colPivHouseholderQr().solve(values);
  return {coef.data(), coef.data() + coef.size()};
}

}  // namespace clyap
