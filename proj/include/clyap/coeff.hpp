#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "clyap/graph.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/symtensor.hpp"

namespace clyap {

struct RowLabel {
  int order = 0;
  MultiIndex index;
};

/// Linear system A vec(M) (+ C terms) = 0. Column labelled a->b multiplies
/// M(b, a); columns are sorted by (a, b), which is column-major vec(M).
struct CoefficientSystem {
  Eigen::MatrixXd matrix;
  std::vector<RowLabel> row_labels;
  std::vector<Edge> col_labels;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  /// M entries in column order.
  Eigen::VectorXd edge_vector(const Eigen::MatrixXd& m) const;
  /// Inverse of edge_vector; absent edges are zero.
  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, int d) const;
  /// C(label) for each row, taking the tensor of the matching order.
  Eigen::VectorXd constant_term(const std::vector<SymmetricTensor>& c) const;
};

enum class RowPolicy {
  kAll,
  kOffDiagonal,
  /// Rows used in the rank certificate on a polytree: every off-diagonal
  /// order-2 row, and for higher orders the rows (i j..j) with i before j in
  /// topological order and (i..i j) for each tree edge i->j.
  kTheoremRows,
};

RowPolicy parse_row_policy(const std::string& name);
std::string to_string(RowPolicy policy);

/// All edges a->b on d nodes, lexicographic.
std::vector<Edge> all_edges(int d);

/// A_k(T) with every unique row and all d^2 columns:
/// entry[(idx), a->b] = mult(idx, b) * T(idx with one b replaced by a).
CoefficientSystem build_A_k(const SymmetricTensor& t);

/// Stacks the selected rows of build_A_k for each tensor (in the given
/// order). `columns` restricts to a graph's edges; `polytree` is required by
/// kTheoremRows.
CoefficientSystem assemble_system(const std::vector<SymmetricTensor>& tensors, RowPolicy rows,
                                  const std::optional<DirectedGraph>& columns = std::nullopt,
                                  const std::optional<DirectedGraph>& polytree = std::nullopt);

/// max(b, d^2) * eps * 1e3, relative to the largest singular value.
double default_rank_rtol(Eigen::Index rows, Eigen::Index cols);

/// Number of singular values above rtol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& a, double rtol);
int numerical_rank(const Eigen::MatrixXd& a);

/// Random point of the parameter set for graph g: off-diagonal weights and
/// self-loop weights uniform in [-1, 1] with 2d subtracted on present
/// self-loops, c2 ~ U[0.5, 2], cr ~ +-U[0.5, 2]. Unstable draws (possible
/// when self-loops are missing) are redrawn. Throws NonStable after
/// `max_attempts` rejections.
ModelParameters random_parameters(const DirectedGraph& g, int r, std::mt19937_64& rng,
                                  int max_attempts = 10000);

struct IdentifiabilityReport {
  DirectedGraph graph;
  int r = 3;
  int trials = 0;
  int components = 1;
  std::vector<int> ranks;
  int expected_rank = 0;
  int max_rank = 0;
  int hits = 0;  // trials reaching expected_rank
  std::string verdict;
  std::vector<std::string> warnings;
};

/// Rank of the off-diagonal system over all d^2 columns at random points.
/// The expected generic rank is d^2 - m for m weakly connected components.
IdentifiabilityReport generic_identifiability_check(const DirectedGraph& g, int r, int trials,
                                                    std::uint64_t seed);

struct KnownCrReport {
  DirectedGraph graph;
  int r = 3;
  int size = 0;  // |E|
  int rank_at_diagonal = 0;
  double det_at_diagonal = 0.0;
  double det_product_formula = 0.0;
  std::vector<int> random_ranks;
  bool identifiable = false;
};

/// Square system with rows (i..i j) for i->j in E (including self-loops)
/// and columns E, for a known diagonal order-r input.
CoefficientSystem known_cr_system(const SymmetricTensor& kappa, const DirectedGraph& g);

KnownCrReport known_cr_identifiability_check(const DirectedGraph& g, int r, int trials = 10,
                                             std::uint64_t seed = 1);

// ------------------------------------------------------ exact combinatorics

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

/// sum_j (r-1)^j binom(q, j) binom(d-1-q, i-j).
cpp_int forsum_coefficient(int d, int q, int i, int r);

/// sum_i (r/2)^(d-1-i) (-1)^i c(d,q,i), evaluated exactly.
cpp_rational forsum_lhs(int d, int q, int r);
/// (r/2 - 1)^(d-1) (-1)^q.
cpp_rational forsum_rhs(int d, int q, int r);
bool forsum_identity_check(int d, int q, int r);

// ------------------------------------------------------- rank certificate

/// Polynomial in zeta with exact rational coefficients, lowest degree first.
using RationalPoly = std::vector<cpp_rational>;

struct Theorem1Witness {
  DirectedGraph polytree;
  std::vector<int> topological_order;
  Edge omitted_column;
  double zeta = 1.0;
  CoefficientSystem system;  // square, d^2 - 1
  int rank = 0;

  /// Filled when the exact determinant was requested.
  std::optional<RationalPoly> determinant;
  int lowest_degree = -1;
  double lowest_coefficient = 0.0;
  int expected_lowest_degree = 0;
  double expected_lowest_magnitude = 0.0;
  bool lowest_term_matches = false;
};

/// Square certificate matrix at the trek-rule parameters on the spanning
/// polytree of g, with the self-loop column of the first node in
/// topological order removed. With `exact_determinant`, the determinant is
/// also expanded exactly in zeta and its lowest-degree term compared with
/// (r/2)^(d-1) (r/2-1)^(d-1) (r/2)^(d(d-1)/2-(d-1)) at degree (d-1)(d+2).
/// Throws DisconnectedGraph.
Theorem1Witness theorem1_witness(const DirectedGraph& g, int r, double zeta,
                                 bool exact_determinant = false);

/// Monomial coefficients (lowest first) of the polynomial of degree
/// zetas.size()-1 interpolating det of the certificate matrix at the given
/// zeta values.
std::vector<double> interpolate_witness_determinant(const DirectedGraph& g, int r,
                                                    const std::vector<double>& zetas);

}  // namespace clyap
