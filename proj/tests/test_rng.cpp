#include <gtest/gtest.h>

#include <set>

#include "neuromap/rng.hpp"

using namespace neuromap;

// Reference outputs computed with a separate Python implementation of the
// published algorithms.

TEST(SplitMix64, ReferenceSequenceFromZero) {
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64(s), 0x06c45d188009454fULL);
}

TEST(SplitMix64, SubstreamSeeds) {
  EXPECT_EQ(substream_seed(7, 0), 0x63cbe1e459320dd7ULL);
  EXPECT_EQ(substream_seed(7, 1), 0x044c3cd7f43c661cULL);
  EXPECT_EQ(substream_seed(7, 2), 0xe6984080bab12a02ULL);
}

TEST(Xoshiro256, ReferenceSequence) {
  Xoshiro256 rng(42);
  EXPECT_EQ(rng(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(rng(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(rng(), 0xae17533239e499a1ULL);
  EXPECT_EQ(rng(), 0xecb8ad4703b360a1ULL);
}

TEST(Xoshiro256, BoundedAndUnitDraws) {
  Xoshiro256 rng(1);
  const std::uint64_t expected[] = {7, 5, 5, 3, 6, 1, 0, 3, 8, 5};
  for (auto e : expected) EXPECT_EQ(rng.below(10), e);
  Xoshiro256 u(1);
  EXPECT_EQ(u.unit(), 0.7029218331588505);
  EXPECT_EQ(u.unit(), 0.5204366199388569);
}

TEST(Xoshiro256, BelowStaysInRange) {
  Xoshiro256 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const auto b = 1 + rng.below(1000);
    EXPECT_LT(rng.below(b), b);
    const auto v = rng.between(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    const double x = rng.unit();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_EQ(rng.below(0), 0U);
  EXPECT_EQ(rng.below(1), 0U);
}

TEST(SampleWithoutReplacement, ReferenceAndDistinct) {
  Xoshiro256 rng(5);
  EXPECT_EQ(sample_without_replacement(rng, 10, 4), (std::vector<std::uint32_t>{2, 6, 7, 8}));
  Xoshiro256 r2(3);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + r2.below(30));
    const auto k = static_cast<std::uint32_t>(r2.below(n + 5));
    const auto v = sample_without_replacement(r2, n, k);
    EXPECT_EQ(v.size(), std::min(n, k));
    std::set<std::uint32_t> s(v.begin(), v.end());
    EXPECT_EQ(s.size(), v.size());
    for (auto x : v) EXPECT_LT(x, n);
  }
}
