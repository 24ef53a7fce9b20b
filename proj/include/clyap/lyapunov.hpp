#pragma once

#include <Eigen/Dense>

#include "clyap/graph.hpp"
#include "clyap/symtensor.hpp"

namespace clyap {

/// Strict stability margin: max Re(eig) must lie below -kStabilityTol.
inline constexpr double kStabilityTol = 1e-10;

/// Largest real part among the eigenvalues of a square matrix.
double spectral_abscissa(const Eigen::MatrixXd& m);

bool is_stable(const Eigen::MatrixXd& m);

/// theta = (M, diag C_2, diag C_r) for an order r >= 3.
struct ModelParameters {
  Eigen::MatrixXd m;
  Eigen::VectorXd c2;
  Eigen::VectorXd cr;
  int r = 3;

  int dim() const noexcept { return static_cast<int>(m.rows()); }
  /// Throws InvalidArgument / NonStable when theta is outside the parameter set.
  void validate() const;
  ModelParameters scaled(double c) const { return {c * m, c * c2, c * cr, r}; }
};

struct CumulantPair {
  SymmetricTensor sigma;
  SymmetricTensor kappa;
};

enum class LyapunovMethod {
  kAuto,              // Kronecker sum when d^k <= kDenseKroneckerLimit
  kKroneckerSum,      // dense d^k x d^k system
  kUniqueVectorized,  // B_k(M) system on the unique entries
};

inline constexpr std::size_t kDenseKroneckerLimit = 4096;

/// Unique K with K x_1 M + ... + K x_k M + C = 0.
/// Throws SingularSystem when the operator is numerically singular.
SymmetricTensor solve_lyapunov(const Eigen::MatrixXd& m, const SymmetricTensor& c,
                               LyapunovMethod method = LyapunovMethod::kAuto);

/// Dense Kronecker-sum operator sum_n (I x .. x M x .. x I) acting on vec(K),
/// column-major.
Eigen::MatrixXd kronecker_sum_operator(const Eigen::MatrixXd& m, int k);

/// B_k(M): 0 = vec_u(C) + B_k(M) vec_u(K).
Eigen::MatrixXd build_B_k(const Eigen::MatrixXd& m, int k);

/// Dense sum_n K x_n M + C.
DenseTensor lyapunov_residual(const Eigen::MatrixXd& m, const SymmetricTensor& kappa,
                              const SymmetricTensor& c);

/// (Sigma, K) for theta; orders 2 and theta.r.
CumulantPair forward_map(const ModelParameters& theta);

/// Parameters used by the DAG trek rule: M_ii = -1/(r zeta), weight 1 on every
/// non-loop edge, C_2 and C_r identity.
ModelParameters trek_witness_parameters(const DirectedGraph& polytree, double zeta, int r);

/// Cumulants of trek_witness_parameters computed through the specialised trek
/// rule rather than a linear solve. Throws NotAPolytree.
CumulantPair trek_closed_form(const DirectedGraph& polytree, double zeta, int r);

}  // namespace clyap
