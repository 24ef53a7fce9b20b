#include <gtest/gtest.h>

#include <random>

#include "clyap/error.hpp"
#include "clyap/symtensor.hpp"

using namespace clyap;

TEST(MultiIndex, SortsOnConstruction) {
  const MultiIndex idx{2, 0, 1, 0};
  EXPECT_EQ(idx.indices(), (std::vector<int>{0, 0, 1, 2}));
  EXPECT_EQ(idx.multiplicity(0), 2);
  EXPECT_EQ(idx.multiplicity(3), 0);
  EXPECT_FALSE(idx.is_diagonal());
  EXPECT_TRUE((MultiIndex{1, 1, 1}).is_diagonal());
}

TEST(MultiIndex, ReplaceOneRecanonicalizes) {
  EXPECT_EQ((MultiIndex{0, 1, 1}).replace_one(1, 0), (MultiIndex{0, 0, 1}));
  EXPECT_EQ((MultiIndex{0, 2}).replace_one(0, 3), (MultiIndex{2, 3}));
  EXPECT_THROW((MultiIndex{0, 2}).replace_one(1, 0), InvalidArgument);
}

TEST(UniqueIndices, SmallCases) {
  const auto two = unique_indices(2, 2);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two[0], (MultiIndex{0, 0}));
  EXPECT_EQ(two[1], (MultiIndex{0, 1}));
  EXPECT_EQ(two[2], (MultiIndex{1, 1}));

  const auto three = unique_indices(2, 3);
  const std::vector<MultiIndex> expected{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  EXPECT_EQ(three, expected);

  EXPECT_EQ(unique_indices(3, 2).size(), 6u);
}

TEST(UniqueIndices, CountAndRankAgree) {
  for (int d = 1; d <= 5; ++d) {
    for (int k = 1; k <= 5; ++k) {
      const auto idxs = unique_indices(d, k);
      ASSERT_EQ(idxs.size(), num_unique(d, k));
      for (std::size_t r = 0; r < idxs.size(); ++r) EXPECT_EQ(unique_rank(idxs[r], d), r);
    }
  }
}

TEST(ModeProduct, IdentityAndZero) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  DenseTensor t({3, 3, 3});
  for (std::size_t i = 0; i < t.size(); ++i) t.at_flat(i) = nd(rng);
  for (int n = 1; n <= 3; ++n) {
    const auto same = n_mode_product(t, Eigen::MatrixXd::Identity(3, 3), n);
    EXPECT_EQ(same.data(), t.data());
    const auto zero = n_mode_product(t, Eigen::MatrixXd::Zero(3, 3), n);
    EXPECT_EQ(zero.max_abs(), 0.0);
  }
}

TEST(ModeProduct, HandComputedSwap) {
  DenseTensor t({2, 2});
  t(std::vector<int>{0, 0}) = 1;
  t(std::vector<int>{0, 1}) = 2;
  t(std::vector<int>{1, 0}) = 2;
  t(std::vector<int>{1, 1}) = 5;
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto out = n_mode_product(t, swap, 1);
  EXPECT_EQ(out(std::vector<int>{0, 0}), 2);
  EXPECT_EQ(out(std::vector<int>{0, 1}), 5);
  EXPECT_EQ(out(std::vector<int>{1, 0}), 1);
  EXPECT_EQ(out(std::vector<int>{1, 1}), 2);
}

TEST(ModeProduct, MatchesMatrixProductsForOrderTwo) {
  Eigen::MatrixXd s(3, 3), m(3, 3);
  s << 2, 1, 0, 1, 3, -1, 0, -1, 4;
  m << 1, 2, 3, -1, 0, 2, 4, 1, -2;
  const auto dense = SymmetricTensor::from_matrix(s).to_dense();
  const auto first = n_mode_product(dense, m, 1);
  const auto second = n_mode_product(dense, m, 2);
  const Eigen::MatrixXd ms = m * s;
  const Eigen::MatrixXd sm = s * m.transpose();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(first(std::vector<int>{i, j}), ms(i, j), 1e-14);
      EXPECT_NEAR(second(std::vector<int>{i, j}), sm(i, j), 1e-14);
    }
  }
}

TEST(SymmetricTensor, VecUOrdering) {
  Eigen::MatrixXd s(2, 2);
  s << 4, 5, 5, 6;
  EXPECT_EQ(SymmetricTensor::from_matrix(s).vec_u(), Eigen::Vector3d(4, 5, 6));
  const auto id = SymmetricTensor::diagonal(3, Eigen::VectorXd::Ones(2));
  Eigen::VectorXd expected(4);
  expected << 1, 0, 0, 1;
  EXPECT_EQ(id.vec_u(), expected);
}

TEST(SymmetricTensor, PermutationInvariantLookupAndRoundTrip) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  const int d = 3, k = 4;
  Eigen::VectorXd v(static_cast<Eigen::Index>(num_unique(d, k)));
  for (auto& x : v) x = nd(rng);
  const auto t = SymmetricTensor::from_vec_u(d, k, v);
  EXPECT_EQ(t.size(), num_unique(d, k));
  std::vector<int> idx{2, 0, 1, 0};
  const double val = t.get(idx);
  std::sort(idx.begin(), idx.end());
  do {
    EXPECT_EQ(t.get(idx), val);
  } while (std::next_permutation(idx.begin(), idx.end()));
  EXPECT_EQ(SymmetricTensor::from_dense(t.to_dense()).vec_u(), v);
  EXPECT_TRUE(t.to_dense().is_symmetric());
}

TEST(SymmetricTensor, FromDenseRejectsAsymmetric) {
  DenseTensor t({2, 2});
  t(std::vector<int>{0, 1}) = 1.0;
  EXPECT_THROW(SymmetricTensor::from_dense(t), InvalidArgument);
}
