#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nsgev/rng.hpp"

using namespace nsgev;

TEST(CounterRng, DeterministicPerSeedAndStream) {
  CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
}

TEST(CounterRng, UniformOpenIntervalAndMean) {
  CounterRng r(1);
  double sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(CounterRng, BelowStaysInRange) {
  CounterRng r(3);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = r.below(7);
    ASSERT_LT(k, 7u);
    ++hist[k];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(CounterRng, PermutationIsAPermutation) {
  CounterRng r(9);
  auto p = random_permutation(25, r);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(CounterRng, DerivedStreamsDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_stream({0, a, b}));
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_stream({1, 2}), derive_stream({2, 1}));
}
