#include "squeezelab/rng.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace squeezelab;

TEST(SeededRng, Replays) {
  SeededRng a(42, 3), b(42, 3);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(SeededRng, StreamsAndSubstreamsDiffer) {
  SeededRng a(42, 0), b(42, 1);
  EXPECT_NE(a.next_u64(), b.next_u64());
  const SeededRng base(9);
  SeededRng s0 = base.substream(0), s1 = base.substream(1), s0b = base.substream(0);
  const auto x = s0.next_u64();
  EXPECT_NE(x, s1.next_u64());
  EXPECT_EQ(x, s0b.next_u64());
}

TEST(SeededRng, UniformRanges) {
  SeededRng r(1);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 5 * std::sqrt(1.0 / 12 / 100000));
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 2000; ++k) {
    const auto i = r.uniform_index(7);
    ASSERT_LT(i, 7u);
    seen.insert(i);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(SeededRng, WorksAsStandardEngine) {
  SeededRng r(5);
  std::normal_distribution<double> g;
  double s = 0.0;
  for (int k = 0; k < 10000; ++k) s += g(r);
  EXPECT_LT(std::abs(s / 10000), 0.05);
  EXPECT_EQ(SeededRng::algorithm, "xoshiro256**");
}
