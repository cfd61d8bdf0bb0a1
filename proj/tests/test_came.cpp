#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mcdc/came.hpp"
#include "mcdc/error.hpp"
#include "mcdc/metrics.hpp"
#include "oracles.hpp"

using namespace mcdc;

namespace {

CodeMatrix matrix(std::size_t cols, std::vector<Code> v) {
  const std::size_t rows = v.size() / cols;
  return CodeMatrix(rows, cols, std::move(v));
}

}  // namespace

TEST(WeightedDistance, Examples) {
  const std::vector<double> theta{0.25, 0.25, 0.5};
  const std::vector<Code> a{1, 2, 3};
  EXPECT_DOUBLE_EQ(weighted_distance(a, a, theta), 0.0);
  EXPECT_DOUBLE_EQ(weighted_distance(a, std::vector<Code>{0, 0, 0}, theta), 1.0);
  EXPECT_DOUBLE_EQ(weighted_distance(a, std::vector<Code>{0, 2, 3}, theta), 0.25);
  EXPECT_THROW(weighted_distance(a, std::vector<Code>{0, 2}, theta), DataError);
}

TEST(CameState, AssignsToZeroDistanceModeAndBreaksTiesLow) {
  const auto data = matrix(2, {0, 0, 1, 1, 2, 2, 0, 1});
  CameState st(data, matrix(2, {0, 0, 1, 1, 2, 2}));
  EXPECT_TRUE(st.assign_objects());
  EXPECT_EQ(st.labels()[2], 2u);
  // (0,1) is one mismatch from both mode 0 and mode 1
  EXPECT_EQ(st.labels()[3], 0u);
  EXPECT_FALSE(st.assign_objects());
}

TEST(CameState, SingleModeTakesEverything) {
  const auto data = matrix(2, {0, 0, 1, 1, 2, 2});
  CameState st(data, matrix(2, {1, 1}));
  st.assign_objects();
  for (const auto l : st.labels()) EXPECT_EQ(l, 0u);
}

TEST(CameState, ModeIsMajorityWithLowCodeTieBreak) {
  const auto majority = matrix(1, {3, 3, 7});
  CameState a(majority, matrix(1, {3}));
  a.assign_objects();
  a.update_modes();
  EXPECT_EQ(a.modes()(0, 0), 3u);
  const auto tie = matrix(1, {7, 3, 7, 3});
  CameState b(tie, matrix(1, {7}));
  b.assign_objects();
  b.update_modes();
  EXPECT_EQ(b.modes()(0, 0), 3u);
}

TEST(CameState, EmptyClusterTakesWorstFitObject) {
  // Mode 1 attracts nobody; object 3 is the farthest from mode 0.
  const auto data = matrix(2, {0, 0, 0, 0, 0, 1, 2, 2});
  CameState st(data, matrix(2, {0, 0, 5, 5}));
  st.assign_objects();
  st.update_modes();
  EXPECT_EQ(st.labels()[3], 1u);
  EXPECT_EQ(st.modes()(1, 0), 2u);
  EXPECT_EQ(st.modes()(1, 1), 2u);
}

TEST(CameState, ThetaFromMatchCounts) {
  // 80 objects: column 0 matches its mode 60 times, column 1 20 times.
  std::vector<Code> v;
  for (int i = 0; i < 80; ++i) {
    v.push_back(i < 60 ? 0 : 1);
    v.push_back(i < 20 ? 0 : 1 + Code(i % 2));
  }
  const auto data = matrix(2, v);
  CameState st(data, matrix(2, {0, 0}));
  st.set_labels(Labels(80, 0));
  st.update_theta();
  EXPECT_DOUBLE_EQ(st.theta()[0], 0.75);
  EXPECT_DOUBLE_EQ(st.theta()[1], 0.25);
}

TEST(CameState, ThetaUniformWhenAllOrNothingMatches) {
  const auto data = matrix(2, {0, 0, 0, 0});
  CameState all(data, matrix(2, {0, 0}));
  all.set_labels({0, 0});
  all.update_theta();
  EXPECT_DOUBLE_EQ(all.theta()[0], 0.5);
  CameState none(data, matrix(2, {1, 1}));
  none.set_labels({0, 0});
  none.update_theta();
  EXPECT_DOUBLE_EQ(none.theta()[0], 0.5);
  EXPECT_DOUBLE_EQ(none.theta()[1], 0.5);
}

TEST(CameState, ObjectiveMatchesBruteForce) {
  const auto data = matrix(2, {0, 1, 1, 1, 2, 0, 0, 0, 1, 2});
  CameState st(data, matrix(2, {0, 0, 1, 1}));
  st.set_theta({0.4, 0.6});
  st.assign_objects();
  const double expected = oracle::weighted_objective(data.data(), 2, st.modes().data(),
                                                     st.labels(), st.theta());
  EXPECT_NEAR(st.objective(), expected, 1e-12);

  const auto zero = matrix(2, {0, 0, 0, 0});
  CameState z(zero, matrix(2, {0, 0}));
  z.assign_objects();
  EXPECT_DOUBLE_EQ(z.objective(), 0.0);

  const auto one = matrix(2, {0, 1});
  CameState o(one, matrix(2, {0, 0}));
  o.set_theta({0.6, 0.4});
  o.assign_objects();
  EXPECT_DOUBLE_EQ(o.objective(), 0.4);
}

TEST(CameState, SeedsAreDistinctRows) {
  const auto data = matrix(1, {0, 0, 0, 0, 1, 1, 2});
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (const bool uniform : {false, true}) {
      std::mt19937_64 rng(s);
      CameState st(data, 3, rng, uniform);
      std::set<Code> modes;
      for (std::size_t l = 0; l < 3; ++l) modes.insert(st.modes()(l, 0));
      EXPECT_EQ(modes.size(), 3u);
    }
  }
  std::mt19937_64 rng(0);
  EXPECT_THROW(CameState(data, 4, rng), DataError);
}

TEST(CameState, FarthestFirstSpreadsSeeds) {
  // Two tight groups; the second seed must come from the other group.
  const auto data = matrix(3, {0, 0, 0, 0, 0, 1, 0, 1, 0, 5, 5, 5, 5, 5, 6});
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(s);
    CameState st(data, 2, rng);
    EXPECT_NE(st.modes()(0, 0) == 5, st.modes()(1, 0) == 5);
  }
}

TEST(RunCame, KOneIsSingleClusterWithUniformTheta) {
  const auto data = matrix(2, {0, 1, 1, 1, 2, 0});
  const auto r = run_came(data, 1, 3);
  for (const auto l : r.labels) EXPECT_EQ(l, 0u);
  // every column has some match with the single mode, not necessarily the same
  EXPECT_NEAR(r.theta[0] + r.theta[1], 1.0, 1e-12);
  const auto uniform = run_came(data, 1, 3, {100, false, true});
  EXPECT_DOUBLE_EQ(uniform.theta[0], 0.5);
}

TEST(RunCame, ColumnEqualToTruthIsRecovered) {
  // column 0 = truth (3 classes), column 1 = a refinement, column 2 = noise
  std::mt19937_64 noise(7);
  std::vector<Code> v;
  Labels truth;
  for (int i = 0; i < 60; ++i) {
    truth.push_back(Code(i % 3));
    v.push_back(Code(i % 3));
    v.push_back(Code(i % 6));
    v.push_back(Code(noise() % 4));
  }
  const auto data = matrix(3, v);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = run_came(data, 3, s);
    EXPECT_DOUBLE_EQ(accuracy(r.labels, truth), 1.0) << "seed " << s;
  }
}

TEST(RunCame, Errors) {
  const auto data = matrix(1, {0, 1});
  EXPECT_THROW(run_came(data, 0, 0), ConfigError);
  EXPECT_THROW(run_came(data, 3, 0), ConfigError);
  CameOptions o;
  o.max_iterations = 0;
  EXPECT_THROW(run_came(data, 1, 0, o), ConfigError);
  const auto dup = matrix(1, {4, 4, 4});
  EXPECT_THROW(run_came(dup, 2, 0), DataError);
}

TEST(RunCame, FrozenModesKeepSeeds) {
  const auto data = matrix(2, {0, 0, 0, 1, 1, 1, 1, 0, 2, 2});
  CameOptions o;
  o.update_modes = false;
  const auto r = run_came(data, 2, 5, o);
  std::mt19937_64 rng(5);
  CameState st(data, 2, rng);
  EXPECT_EQ(r.modes, st.modes());
}

TEST(RunCame, Deterministic) {
  std::mt19937_64 g(1);
  std::vector<Code> v(200 * 4);
  for (auto& x : v) x = Code(g() % 3);
  const auto data = matrix(4, v);
  const auto a = run_came(data, 4, 11);
  const auto b = run_came(data, 4, 11);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.iterations, b.iterations);
}
