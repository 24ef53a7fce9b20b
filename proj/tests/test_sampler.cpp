#include <gtest/gtest.h>

#include <cmath>

#include "clyap/cumulants.hpp"
#include "clyap/error.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/sampler.hpp"

using namespace clyap;

TEST(ConstructM, SpecialCases) {
  EXPECT_LT((construct_M({4, 0.0, 0.0}) + 4.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR((DriftSpec{3, 10.0, 0.2}).eta(), 1.0 / 7.0, 1e-15);
  EXPECT_THROW(construct_M({3, 10.0, 1.0}), InvalidArgument);
  EXPECT_THROW(construct_M({3, 10.0, -0.5}), InvalidArgument);
}

TEST(ConstructM, StudyGridIsStable) {
  for (int d : {3, 6, 12}) {
    for (double gamma : {5.0, 10.0, 15.0}) {
      for (double rho : {0.2, 0.8}) EXPECT_TRUE(is_stable(construct_M({d, gamma, rho})));
    }
  }
}

TEST(ClosedFormSigma, MatchesSolverAndCorrelation) {
  const double lambda = 0.5, mu = 0.8, nu = 1.0;
  const double c = lambda * mu * (mu * nu + 1.0) / (2.0 * 3 * (nu + 1.0));
  EXPECT_LT((closed_form_sigma({3, 10.0, 0.0}, lambda, mu, nu) - c * Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  for (int d = 2; d <= 6; ++d) {
    for (double rho : {0.2, 0.8}) {
      const DriftSpec spec{d, 10.0, rho};
      const auto levy = LevySpec::uniform_beta(d, lambda, mu, nu);
      const auto solved =
          solve_lyapunov(construct_M(spec), SymmetricTensor::diagonal(2, levy.cumulant_diagonal(2))).to_matrix();
      const auto closed = closed_form_sigma(spec, lambda, mu, nu);
      EXPECT_LT((solved - closed).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(closed(0, 1) / std::sqrt(closed(0, 0) * closed(1, 1)), rho, 1e-12);
    }
  }
}

TEST(Sampler, DeterministicAcrossThreadCounts) {
  const auto m = construct_M({3, 10.0, 0.2});
  const auto levy = LevySpec::uniform_beta(3, 0.5, 0.8, 1.0);
  const auto a = sample_steady_state(m, levy, 500, 42, kDefaultTruncTol, 1);
  const auto b = sample_steady_state(m, levy, 500, 42, kDefaultTruncTol, 4);
  const auto c = sample_steady_state(m, levy, 500, 43, kDefaultTruncTol, 1);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_NE(a.rows, c.rows);
  // A prefix of a longer run is the shorter run.
  const auto longer = sample_steady_state(m, levy, 800, 42, kDefaultTruncTol, 2);
  EXPECT_EQ(Eigen::MatrixXd(longer.rows.topRows(500)), a.rows);
}

TEST(Sampler, MeanAndCovarianceWithinFourStandardErrors) {
  const DriftSpec spec{3, 10.0, 0.2};
  const auto m = construct_M(spec);
  const auto levy = LevySpec::uniform_beta(3, 0.5, 0.8, 1.0);
  const int n = 50000;
  const auto s = sample_steady_state(m, levy, n, 5);
  const Eigen::VectorXd mean_truth = -m.partialPivLu().solve(levy.cumulant_diagonal(1));
  const Eigen::VectorXd mean = s.rows.colwise().mean();
  const Eigen::MatrixXd centered = s.rows.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;
  const auto sigma = closed_form_sigma(spec, 0.5, 0.8, 1.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(mean(i) - mean_truth(i)), 4.0 * std::sqrt(cov(i, i) / n));
    for (int j = 0; j < 3; ++j) {
      const double var_ij = (centered.col(i).array() * centered.col(j).array() - cov(i, j)).square().mean();
      EXPECT_LT(std::abs(cov(i, j) - sigma(i, j)), 4.0 * std::sqrt(var_ij / n));
    }
  }
}

TEST(Sampler, RejectsBadInputs) {
  const auto levy = LevySpec::uniform_beta(2, 0.5, 0.8, 1.0);
  EXPECT_THROW(sample_steady_state(Eigen::MatrixXd::Identity(2, 2), levy, 10, 1), NonStable);
  EXPECT_THROW(sample_steady_state(-Eigen::MatrixXd::Identity(3, 3), levy, 10, 1), InvalidArgument);
  EXPECT_THROW(sample_steady_state(-Eigen::MatrixXd::Identity(2, 2), levy, 0, 1), InvalidArgument);
  Eigen::MatrixXd defective(2, 2);
  defective << -1.0, 1.0, 0.0, -1.0;
  EXPECT_THROW(sample_steady_state(defective, levy, 10, 1), IllConditionedEigenvectors);
}

TEST(TwoPointJump, ExactMoments) {
  const auto check = [](const TwoPointJump& j, double c2, double cr, int r) {
    EXPECT_NEAR(jump_raw_moment(j, 2), c2, 1e-12);
    EXPECT_NEAR(jump_raw_moment(j, r), cr, 1e-12);
  };
  const auto big = two_point_jump(1.0, 2.0, 3);
  EXPECT_NEAR(big.a, 2.0, 1e-15);
  EXPECT_EQ(big.b, 0.0);
  EXPECT_NEAR(big.p, 0.25, 1e-15);
  check(big, 1.0, 2.0, 3);

  const auto small = two_point_jump(1.0, 0.5, 3);
  EXPECT_NEAR(small.a, 1.0, 1e-15);
  EXPECT_NEAR(small.b, -1.0, 1e-15);
  EXPECT_NEAR(small.p, 0.75, 1e-15);
  check(small, 1.0, 0.5, 3);

  check(two_point_jump(2.0, -7.0, 5), 2.0, -7.0, 5);
  check(two_point_jump(0.5, 3.0, 4), 0.5, 3.0, 4);
  EXPECT_THROW(two_point_jump(1.0, 0.5, 4), Infeasible);
  EXPECT_THROW(two_point_jump(1.0, -2.0, 4), Infeasible);
}
