#include <gtest/gtest.h>

#include <random>

#include "clyap/cumulants.hpp"
#include "clyap/error.hpp"
#include "clyap/estimator.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/sampler.hpp"
#include "fixtures.hpp"

using namespace clyap;

namespace {

Eigen::VectorXd vec(const Eigen::MatrixXd& m) { return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()); }

std::vector<SymmetricTensor> population(const ModelParameters& theta) {
  const auto pair = forward_map(theta);
  return {pair.sigma, pair.kappa};
}

}  // namespace

TEST(LeastSingularVector, ExactSystemRecoversNormalizedDrift) {
  std::mt19937_64 rng(1);
  for (const auto& g : {fixtures::fig1(), fixtures::fig2(), DirectedGraph::complete(3)}) {
    const auto theta = fixtures::random_theta(g, 3, rng);
    const auto est = estimate_drift(population(theta));
    const Eigen::MatrixXd truth = theta.m / theta.m.norm();
    EXPECT_LT((est.m_hat - truth).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(est.sigma_min, 1e-10);
    EXPECT_GT(est.gap, 1e-6);
    EXPECT_TRUE(est.stable);
    EXPECT_LE(est.m_hat.trace(), 0.0);
  }
}

TEST(LeastSingularVector, DuplicatedRowsLeaveEstimateUnchanged) {
  std::mt19937_64 rng(2);
  const auto theta = fixtures::random_theta(fixtures::fig1(), 3, rng);
  const auto sys = drift_system(population(theta));
  Eigen::MatrixXd doubled(2 * sys.rows(), sys.cols());
  doubled << sys.matrix, sys.matrix;
  const auto a = least_singular_vector(sys.matrix);
  const auto b = least_singular_vector(doubled);
  EXPECT_LT((a.m_hat - b.m_hat).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LeastSingularVector, PerturbationBoundedByGap) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const auto theta = fixtures::random_theta(DirectedGraph::complete(3), 3, rng);
  const auto sys = drift_system(population(theta));
  Eigen::MatrixXd noise(sys.rows(), sys.cols());
  for (auto& x : noise.reshaped()) x = nd(rng);
  const double eps = 1e-6;
  const auto clean = least_singular_vector(sys.matrix);
  const auto noisy = least_singular_vector(Eigen::MatrixXd(sys.matrix + eps * noise));
  const double spectral = Eigen::JacobiSVD<Eigen::MatrixXd>(noise).singularValues()(0);
  const double bound = 2.0 * eps * spectral / clean.gap;
  EXPECT_LT((noisy.m_hat - clean.m_hat).norm(), bound);
}

TEST(LeastSingularVector, WideMatrixAndShapeChecks) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  EXPECT_THROW(least_singular_vector(a), DegenerateSpectrum);
  EXPECT_THROW(least_singular_vector(Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
}

TEST(EstimatorOrders, Validation) {
  EXPECT_EQ(estimator_orders({3, 2}), (std::vector<int>{2, 3}));
  EXPECT_THROW(estimator_orders({3, 4}), InvalidArgument);
  EXPECT_THROW(estimator_orders({2}), InvalidArgument);
}

TEST(MoorePenrose, InverseAndPenroseIdentities) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd sq(4, 4);
  for (auto& x : sq.reshaped()) x = nd(rng);
  EXPECT_LT((moore_penrose(sq) - sq.inverse()).cwiseAbs().maxCoeff(), 1e-10);

  Eigen::MatrixXd a(20, 16);
  for (auto& x : a.reshaped()) x = nd(rng);
  a.col(3) = a.col(0) + a.col(1);  // make it rank deficient
  const auto p = moore_penrose(a);
  EXPECT_LT((a * p * a - a).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((p * a * p - p).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((a * p - (a * p).transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((p * a - (p * a).transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MoorePenrose, ExactSystemProjectsOffKernel) {
  std::mt19937_64 rng(6);
  const auto theta = fixtures::random_theta(fixtures::fig2(), 3, rng);
  const auto sys = drift_system(population(theta));
  const Eigen::VectorXd v = vec(theta.m / theta.m.norm());
  const Eigen::MatrixXd proj = moore_penrose(sys.matrix, 1e-9) * sys.matrix;
  const Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(16, 16) - v * v.transpose();
  EXPECT_LT((proj - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Jacobian, CentralDifferencesAndLinearity) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const auto theta = fixtures::random_theta(DirectedGraph::complete(3), 3, rng);
  const auto sys = drift_system(population(theta));
  const SingularVectorJacobian jac(sys.matrix);
  Eigen::MatrixXd h(sys.rows(), sys.cols());
  for (auto& x : h.reshaped()) x = nd(rng);
  h /= h.norm();
  const double eps = 1e-6;
  const Eigen::VectorXd plus = vec(least_singular_vector(Eigen::MatrixXd(sys.matrix + eps * h)).m_hat);
  const Eigen::VectorXd minus = vec(least_singular_vector(Eigen::MatrixXd(sys.matrix - eps * h)).m_hat);
  const Eigen::VectorXd fd = (plus - minus) / (2 * eps);
  const Eigen::VectorXd an = jac.apply(h);
  EXPECT_LT((fd - an).norm() / an.norm(), 1e-5);
  EXPECT_LT((jac.apply(3.0 * h) - 3.0 * an).norm(), 1e-12 * an.norm());
}

TEST(Jacobian, PerturbationAlongKernelRowsIsInvisible) {
  std::mt19937_64 rng(8);
  const auto theta = fixtures::random_theta(fixtures::fig1(), 3, rng);
  const auto sys = drift_system(population(theta));
  const SingularVectorJacobian jac(sys.matrix);
  // H v lying in the left null space of A is annihilated by A^+.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullU);
  const Eigen::VectorXd u_null = svd.matrixU().col(svd.matrixU().cols() - 1);
  const Eigen::MatrixXd h = u_null * jac.kernel().transpose();
  EXPECT_LT(jac.apply(h).norm(), 1e-10);
}

TEST(AsymptoticCovariance, ZeroOmegaGivesZero) {
  std::mt19937_64 rng(9);
  const auto theta = fixtures::random_theta(fixtures::fig1(), 3, rng);
  const auto sys = drift_system(population(theta));
  const int p = static_cast<int>(num_unique(4, 2) + num_unique(4, 3));
  const auto cov = asymptotic_covariance(theta.m, sys, Eigen::MatrixXd::Zero(p, p), {2, 3});
  EXPECT_EQ(cov.total_variance, 0.0);
  EXPECT_THROW(asymptotic_covariance(theta.m, sys, Eigen::MatrixXd::Zero(3, 3), {2, 3}), InvalidArgument);
}

TEST(Estimator, PermutationEquivariance) {
  const auto m = construct_M({3, 10.0, 0.2});
  const auto sample = sample_steady_state(m, LevySpec::uniform_beta(3, 0.5, 0.8, 1.0), 4000, 12);
  const std::vector<int> perm{2, 0, 1};
  SampleBatch permuted{Eigen::MatrixXd(sample.n(), 3)};
  for (int j = 0; j < 3; ++j) permuted.rows.col(j) = sample.rows.col(perm[static_cast<std::size_t>(j)]);
  const auto a = estimate_drift(sample, {2, 3});
  const auto b = estimate_drift(permuted, {2, 3});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(b.m_hat(i, j), a.m_hat(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]), 1e-10);
    }
  }
}

TEST(Estimator, ScaleInvarianceInTheLimit) {
  const auto m = construct_M({3, 10.0, 0.2});
  const auto sample = sample_steady_state(m, LevySpec::uniform_beta(3, 0.5, 0.8, 1.0), 100000, 13);
  SampleBatch scaled{2.5 * sample.rows};
  const auto a = estimate_drift(sample, {2, 3});
  const auto b = estimate_drift(scaled, {2, 3});
  const Eigen::MatrixXd truth = m / m.norm();
  EXPECT_LT((a.m_hat - truth).norm(), 0.1);
  EXPECT_LT((b.m_hat - truth).norm(), 0.1);
  EXPECT_LT((a.m_hat - b.m_hat).norm(), 0.1);
}

TEST(Estimator, GraphRestrictedColumns) {
  std::mt19937_64 rng(10);
  const auto g = fixtures::fig1();
  const auto theta = fixtures::random_theta(g, 3, rng);
  const auto est = estimate_drift(population(theta), g);
  EXPECT_EQ(est.columns.size(), g.num_edges());
  EXPECT_LT((est.m_hat - theta.m / theta.m.norm()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(AsymptoticCovariance, MatchesMonteCarloSpread) {
  // Replicated estimates at d = 2 against the delta-method covariance. The
  // drift is chosen well identified so n = 1e4 is already in the linear regime.
  Eigen::MatrixXd m(2, 2);
  m << -15.0, 5.0, 10.0, -5.0;
  const auto levy = LevySpec::uniform_beta(2, 0.5, 0.8, 1.0);
  const std::vector<int> orders{2, 3};
  std::vector<SymmetricTensor> truth;
  for (int k : orders) truth.push_back(solve_lyapunov(m, SymmetricTensor::diagonal(k, levy.cumulant_diagonal(k))));
  const auto sys = drift_system(truth);
  const auto omega = estimate_omega(sample_steady_state(m, levy, 500000, 77), orders);
  const auto cov = asymptotic_covariance(m, sys, omega, orders);

  const int reps = 200;
  const int n = 10000;
  const Eigen::VectorXd v = vec(m / m.norm());
  Eigen::MatrixXd centered(reps, 4);
  for (int l = 0; l < reps; ++l) {
    const auto est = estimate_drift(sample_steady_state(m, levy, n, 1000 + static_cast<std::uint64_t>(l)), orders);
    centered.row(l) = std::sqrt(static_cast<double>(n)) * (vec(est.m_hat) - v).transpose();
  }
  const Eigen::MatrixXd empirical = centered.transpose() * centered / reps;
  EXPECT_LT((empirical - cov.matrix).norm() / cov.matrix.norm(), 0.25);
  // Errors are tangent to the unit sphere at vec(M).
  EXPECT_LT(v.dot(cov.matrix * v), 1e-8 * cov.total_variance);
}

TEST(AsymptoticCovariance, PermutationConjugates) {
  Eigen::MatrixXd m(2, 2);
  m << -3.0, 1.0, 2.0, -1.0;
  const auto levy = LevySpec::uniform_beta(2, 0.5, 0.8, 1.0);
  const std::vector<int> orders{2, 3};
  const auto sample = sample_steady_state(m, levy, 20000, 5);
  const auto cov_of = [&](const Eigen::MatrixXd& drift, const SampleBatch& s) {
    std::vector<SymmetricTensor> truth;
    for (int k : orders) {
      truth.push_back(solve_lyapunov(drift, SymmetricTensor::diagonal(k, levy.cumulant_diagonal(k))));
    }
    return asymptotic_covariance(drift, drift_system(truth), estimate_omega(s, orders), orders).matrix;
  };
  Eigen::Matrix2d p;
  p << 0, 1, 1, 0;
  const Eigen::MatrixXd mp = p * m * p.transpose();
  const SampleBatch swapped{sample.rows * p.transpose()};
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) perm((1 - b) * 2 + (1 - a), b * 2 + a) = 1.0;
  }
  const Eigen::MatrixXd original = cov_of(m, sample);
  const Eigen::MatrixXd relabeled = cov_of(mp, swapped);
  EXPECT_LT((relabeled - perm * original * perm.transpose()).norm(), 1e-8 * original.norm());
}
