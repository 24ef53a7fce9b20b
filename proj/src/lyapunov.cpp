#include "clyap/lyapunov.hpp"

#include <cmath>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "clyap/error.hpp"

namespace clyap {

double spectral_abscissa(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("spectral_abscissa: matrix must be square");
  if (m.size() == 0) throw InvalidArgument("spectral_abscissa: empty matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_stable(const Eigen::MatrixXd& m) { return spectral_abscissa(m) < -kStabilityTol; }

void ModelParameters::validate() const {
  const auto d = m.rows();
  if (d < 1 || m.cols() != d) throw InvalidArgument("ModelParameters: M must be square");
  if (c2.size() != d || cr.size() != d) {
    throw InvalidArgument("ModelParameters: c2 and cr must have length d");
  }
  if (r < 3) throw InvalidArgument("ModelParameters: r must be >= 3");
  if ((c2.array() <= 0.0).any()) throw InvalidArgument("ModelParameters: c2 must be positive");
  if ((cr.array() == 0.0).any()) throw InvalidArgument("ModelParameters: cr must be nonzero");
  if (!is_stable(m)) throw NonStable("ModelParameters: M is not stable");
}

Eigen::MatrixXd kronecker_sum_operator(const Eigen::MatrixXd& m, int k) {
  const int d = static_cast<int>(m.rows());
  const DenseTensor shape(std::vector<int>(static_cast<std::size_t>(k), d));
  const auto n = static_cast<Eigen::Index>(shape.size());
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    auto idx = shape.unflat(static_cast<std::size_t>(col));
    for (int mode = 0; mode < k; ++mode) {
      const int src = idx[static_cast<std::size_t>(mode)];
      for (int j = 0; j < d; ++j) {
        idx[static_cast<std::size_t>(mode)] = j;
        op(static_cast<Eigen::Index>(shape.flat(idx)), col) += m(j, src);
      }
      idx[static_cast<std::size_t>(mode)] = src;
    }
  }
  return op;
}

Eigen::MatrixXd build_B_k(const Eigen::MatrixXd& m, int k) {
  if (m.rows() != m.cols()) throw InvalidArgument("build_B_k: M must be square");
  const int d = static_cast<int>(m.rows());
  const auto rows = unique_indices(d, k);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  // Row idx of sum_n K x_n M is sum_n sum_j M(idx_n, j) K(idx with n-th -> j).
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto& idx = rows[static_cast<std::size_t>(row)];
    for (int pos = 0; pos < k; ++pos) {
      auto replaced = idx.indices();
      const int i = replaced[static_cast<std::size_t>(pos)];
      for (int j = 0; j < d; ++j) {
        if (m(i, j) == 0.0) continue;
        replaced[static_cast<std::size_t>(pos)] = j;
        b(row, static_cast<Eigen::Index>(unique_rank(MultiIndex(replaced), d))) += m(i, j);
      }
    }
  }
  return b;
}

namespace {

void check_solvable(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const char* route) {
  // rcond() is unreliable when a pivot is exactly zero, so look at the pivots too.
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double eps = Eigen::NumTraits<double>::epsilon();
  const double rc = pivots.minCoeff() <= eps * pivots.maxCoeff() ? 0.0 : lu.rcond();
  if (!(rc > eps)) {
    throw SingularSystem(std::string("solve_lyapunov: ") + route +
                         " operator is numerically singular (rcond=" + std::to_string(rc) + ")");
  }
}

// LU solve followed by two rounds of iterative refinement; the operators of
// deep trek structures are badly scaled but far from singular.
Eigen::VectorXd refined_solve(const Eigen::MatrixXd& a, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                              const Eigen::VectorXd& b) {
  Eigen::VectorXd x = lu.solve(b);
  for (int it = 0; it < 2; ++it) x += lu.solve(b - a * x);
  return x;
}

}  // namespace

SymmetricTensor solve_lyapunov(const Eigen::MatrixXd& m, const SymmetricTensor& c,
                               LyapunovMethod method) {
  if (m.rows() != m.cols() || m.rows() != c.dim()) {
    throw InvalidArgument("solve_lyapunov: M must be d x d with d matching C");
  }
  const int d = c.dim();
  const int k = c.order();
  std::size_t dense_size = 1;
  for (int i = 0; i < k; ++i) dense_size *= static_cast<std::size_t>(d);
  if (method == LyapunovMethod::kAuto) {
    method = dense_size <= kDenseKroneckerLimit ? LyapunovMethod::kKroneckerSum
                                                : LyapunovMethod::kUniqueVectorized;
  }

  if (method == LyapunovMethod::kUniqueVectorized) {
    const Eigen::MatrixXd b = build_B_k(m, k);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    check_solvable(lu, "unique-vectorized");
    const Eigen::VectorXd sol = refined_solve(b, lu, -c.vec_u());
    return SymmetricTensor::from_vec_u(d, k, sol);
  }

  const Eigen::MatrixXd op = kronecker_sum_operator(m, k);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(op);
  check_solvable(lu, "Kronecker-sum");
  const DenseTensor cd = c.to_dense();
  const Eigen::VectorXd sol = refined_solve(op, lu, -cd.vec());
  DenseTensor kd(cd.dims());
  for (std::size_t i = 0; i < kd.size(); ++i) kd.at_flat(i) = sol(static_cast<Eigen::Index>(i));
  // canonical read-off; the solution is symmetric up to round-off
  SymmetricTensor out(d, k);
  const auto idxs = unique_indices(d, k);
  for (std::size_t r = 0; r < idxs.size(); ++r) out.values()[r] = kd(idxs[r].indices());
  return out;
}

DenseTensor lyapunov_residual(const Eigen::MatrixXd& m, const SymmetricTensor& kappa,
                              const SymmetricTensor& c) {
  const DenseTensor kd = kappa.to_dense();
  DenseTensor res = c.to_dense();
  for (int n = 1; n <= kappa.order(); ++n) res += n_mode_product(kd, m, n);
  return res;
}

CumulantPair forward_map(const ModelParameters& theta) {
  theta.validate();
  return {solve_lyapunov(theta.m, SymmetricTensor::diagonal(2, theta.c2)),
          solve_lyapunov(theta.m, SymmetricTensor::diagonal(theta.r, theta.cr))};
}

ModelParameters trek_witness_parameters(const DirectedGraph& polytree, double zeta, int r) {
  if (!(zeta > 0.0)) throw InvalidArgument("zeta must be positive");
  if (r < 3) throw InvalidArgument("r must be >= 3");
  const int d = polytree.num_nodes();
  ModelParameters theta;
  theta.r = r;
  theta.m = Eigen::MatrixXd::Identity(d, d) * (-1.0 / (r * zeta));
  for (const auto& e : polytree.non_loop_edges()) theta.m(e.to, e.from) = 1.0;
  theta.c2 = Eigen::VectorXd::Ones(d);
  theta.cr = Eigen::VectorXd::Ones(d);
  return theta;
}

CumulantPair trek_closed_form(const DirectedGraph& polytree, double zeta, int r) {
  if (!is_polytree(polytree)) throw NotAPolytree("trek_closed_form: non-loop part is not a polytree");
  if (!(zeta > 0.0)) throw InvalidArgument("zeta must be positive");
  if (r < 3) throw InvalidArgument("r must be >= 3");
  using boost::math::binomial_coefficient;
  using boost::math::factorial;
  const int d = polytree.num_nodes();
  const double half_r = r / 2.0;

  CumulantPair out{SymmetricTensor(d, 2), SymmetricTensor(d, r)};
  const auto pairs = unique_indices(d, 2);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double s = 0.0;
    for (const auto& trek : enumerate_treks(polytree, pairs[p].indices())) {
      const int l1 = trek.length(0);
      const int l2 = trek.length(1);
      const int e = l1 + l2 + 1;
      s += std::pow(zeta * half_r, e) *
           binomial_coefficient<double>(static_cast<unsigned>(l1 + l2), static_cast<unsigned>(l1));
    }
    out.sigma.values()[p] = s;
  }
  const auto tuples = unique_indices(d, r);
  for (std::size_t p = 0; p < tuples.size(); ++p) {
    double s = 0.0;
    for (const auto& trek : enumerate_treks(polytree, tuples[p].indices())) {
      const int total = trek.total_length();
      double multinomial = factorial<double>(static_cast<unsigned>(total));
      for (std::size_t j = 0; j < trek.walks.size(); ++j) {
        multinomial /= factorial<double>(static_cast<unsigned>(trek.length(j)));
      }
      s += std::pow(zeta, total + 1) * multinomial;
    }
    out.kappa.values()[p] = s;
  }
  return out;
}

}  // namespace clyap
