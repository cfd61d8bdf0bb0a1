#include <gtest/gtest.h>

#include <random>

#include "mcdc/error.hpp"
#include "mcdc/metrics.hpp"
#include "oracles.hpp"

using namespace mcdc;

TEST(Contingency, CountsAndCompaction) {
  const Labels pred{5, 5, 9, 9, 9};
  const Labels truth{0, 1, 1, 1, 0};
  const ContingencyTable t(pred, truth);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_EQ(t.at(0, 0), 1u);
  EXPECT_EQ(t.at(1, 1), 2u);
  EXPECT_EQ(t.row_sums(), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(t.n(), 5u);
}

TEST(Contingency, Errors) {
  EXPECT_THROW(ContingencyTable(Labels{0, 1}, Labels{0}), DataError);
  EXPECT_THROW(ContingencyTable(Labels{}, Labels{}), DataError);
  EXPECT_THROW(ari(Labels{0}, Labels{0, 1}), DataError);
}

TEST(Matching, RectangularAndSquare) {
  EXPECT_DOUBLE_EQ(max_weight_matching({{1, 5}, {4, 1}}), 9.0);
  EXPECT_DOUBLE_EQ(max_weight_matching({{3, 1, 7}}), 7.0);
  EXPECT_DOUBLE_EQ(max_weight_matching({{3}, {8}, {1}}), 8.0);
  EXPECT_DOUBLE_EQ(max_weight_matching({}), 0.0);
}

TEST(Accuracy, Examples) {
  const Labels truth{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(accuracy(truth, truth), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(Labels{2, 2, 0, 0, 1, 1}, truth), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1}), 0.75);
}

TEST(Ari, Examples) {
  const Labels truth{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(ari(Labels{7, 7, 3, 3, 1, 1}, truth), 1.0);
  EXPECT_DOUBLE_EQ(ari(Labels(6, 0), truth), 0.0);
  EXPECT_DOUBLE_EQ(ari(Labels{0}, Labels{4}), 1.0);
}

TEST(Ari, RandomPairsMatchPairCounting) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    Labels a(6), b(6);
    for (auto& x : a) x = Label(rng() % 3);
    for (auto& x : b) x = Label(rng() % 4);
    EXPECT_NEAR(ari(a, b), oracle::ari(a, b), 1e-9);
  }
}

TEST(Ami, Examples) {
  const Labels truth{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(ami(Labels{4, 4, 0, 0, 1, 1}, truth), 1.0);
  EXPECT_DOUBLE_EQ(ami(Labels(6, 0), Labels(6, 3)), 1.0);
}

TEST(Ami, IndependentLabelsNearZero) {
  std::mt19937_64 rng(5);
  Labels a(3000), b(3000);
  for (auto& x : a) x = Label(rng() % 4);
  for (auto& x : b) x = Label(rng() % 3);
  EXPECT_NEAR(ami(a, b), 0.0, 0.05);
}

TEST(Ami, ExpectedMiMatchesHypergeometricSum) {
  const Labels a{0, 0, 0, 1, 1, 2, 2, 2};
  const Labels b{0, 1, 1, 1, 0, 0, 2, 3};
  const ContingencyTable t(a, b);
  const double emi = expected_mutual_information(t);
  EXPECT_NEAR(emi, oracle::expected_mi_hypergeometric(a, b), 1e-9);
  EXPECT_NEAR(emi, oracle::expected_mi_by_permutation(a, b), 1e-9);
  EXPECT_NEAR(mutual_information(t), oracle::mutual_information(a, b), 1e-12);
  const double expected = oracle::ami_from(oracle::mutual_information(a, b), emi,
                                           oracle::entropy(a), oracle::entropy(b), false);
  EXPECT_NEAR(ami(a, b), expected, 1e-9);
}

TEST(Fm, Examples) {
  const Labels truth{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(fm(Labels{3, 3, 1, 1}, truth), 1.0);
  EXPECT_DOUBLE_EQ(fm(Labels{0, 1, 2, 3}, truth), 0.0);
  const Labels p{0, 0, 1, 1}, q{0, 1, 1, 1};
  EXPECT_NEAR(fm(p, q), oracle::fm(p, q), 1e-12);
  EXPECT_NEAR(fm(p, q), 1.0 / std::sqrt(6.0), 1e-12);
}

TEST(SamePartition, RelabelingAndMismatch) {
  EXPECT_TRUE(same_partition(Labels{0, 0, 1}, Labels{5, 5, 2}));
  EXPECT_FALSE(same_partition(Labels{0, 0, 1}, Labels{5, 2, 2}));
  EXPECT_FALSE(same_partition(Labels{0, 1}, Labels{0, 0}));
  EXPECT_FALSE(same_partition(Labels{0}, Labels{0, 0}));
}

TEST(Evaluate, AllIndicesAreInvariantToRelabeling) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    Labels a(30), b(30);
    for (auto& x : a) x = Label(rng() % 4);
    for (auto& x : b) x = Label(rng() % 3);
    Labels a2 = a;
    for (auto& x : a2) x = 10 + (3 - x);
    const auto s1 = evaluate(a, b);
    const auto s2 = evaluate(a2, b);
    EXPECT_NEAR(s1.acc, s2.acc, 1e-12);
    EXPECT_NEAR(s1.ari, s2.ari, 1e-12);
    EXPECT_NEAR(s1.ami, s2.ami, 1e-12);
    EXPECT_NEAR(s1.fm, s2.fm, 1e-12);
  }
}
