#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"
#include "squeezelab/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace squeezelab;

namespace {

std::vector<double> css_population(int n) {
  const Eigen::VectorXd p = population_distribution(css(DickeSpace(n), std::numbers::pi / 2, Vec3::UnitX()));
  return {p.data(), p.data() + p.size()};
}

double sample_stddev(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(x.size() - 1));
}

std::vector<double> pd_values(const std::vector<ShotSample>& shots) {
  std::vector<double> out;
  for (const auto& s : shots) out.push_back(s.p_d);
  return out;
}

}  // namespace

TEST(Sampler, DegenerateDistributions) {
  SeededRng rng(1);
  const std::vector<double> first{1.0, 0.0, 0.0};
  for (std::size_t k : sample_rejection(first, rng, 200)) ASSERT_EQ(k, 0u);
  for (std::size_t k : sample_inverse_cdf(first, rng, 200)) ASSERT_EQ(k, 0u);
  const std::vector<double> second{0.0, 1.0};
  for (std::size_t k : sample_inverse_cdf(second, rng, 200)) ASSERT_EQ(k, 1u);
  for (std::size_t k : sample_rejection(second, rng, 200)) ASSERT_EQ(k, 1u);
}

TEST(Sampler, InputErrors) {
  SeededRng rng(1);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(sample_rejection(zero, rng, 1), InvalidArgument);
  EXPECT_THROW(sample_inverse_cdf(zero, rng, 1), InvalidArgument);
  const std::vector<double> unnormalized{0.5, 0.4};
  EXPECT_THROW(sample_inverse_cdf(unnormalized, rng, 1), InvalidArgument);
  const std::vector<double> negative{1.5, -0.5};
  EXPECT_THROW(sample_rejection(negative, rng, 1), InvalidArgument);
  const std::vector<double> ok{1.0};
  EXPECT_THROW(sample_rejection(ok, rng, 0), InvalidArgument);
}

TEST(Sampler, UniformFrequencies) {
  const std::vector<double> uniform(4, 0.25);
  const std::size_t draws = 100000;
  for (int method = 0; method < 2; ++method) {
    SeededRng rng(77, method);
    const auto idx = method == 0 ? sample_rejection(uniform, rng, draws) : sample_inverse_cdf(uniform, rng, draws);
    std::vector<double> freq(4, 0.0);
    for (std::size_t k : idx) freq[k] += 1.0 / draws;
    const double sigma = std::sqrt(0.25 * 0.75 / draws);
    for (double f : freq) EXPECT_NEAR(f, 0.25, 5 * sigma);
  }
}

TEST(Sampler, CssMeanWithinStandardErrors) {
  const auto p = css_population(50);
  const std::size_t draws = 20000;
  SeededRng a(3), b(4);
  for (const auto& idx : {sample_rejection(p, a, draws), sample_inverse_cdf(p, b, draws)}) {
    double mean = 0.0;
    for (std::size_t k : idx) mean += static_cast<double>(k);
    mean /= draws;
    EXPECT_NEAR(mean, 25.0, 3.0 * std::sqrt(12.5 / draws));
  }
}

TEST(Sampler, MethodsAgreeByChiSquared) {
  const auto p = css_population(50);
  SeededRng a(10), b(11);
  const auto x = sample_rejection(p, a, 100000);
  const auto y = sample_inverse_cdf(p, b, 100000);
  EXPECT_GT(chi_squared_two_sample(x, y, p.size()), 0.01);
}

TEST(Sampler, ChiSquaredDetectsDifferentDistributions) {
  const std::vector<double> p{0.5, 0.5}, q{0.6, 0.4};
  SeededRng a(1), b(2);
  EXPECT_LT(chi_squared_two_sample(sample_inverse_cdf(p, a, 20000), sample_inverse_cdf(q, b, 20000), 2), 1e-6);
}

TEST(Sampler, Replay) {
  const auto p = css_population(10);
  SeededRng a(123, 4), b(123, 4);
  EXPECT_EQ(sample_inverse_cdf(p, a, 500), sample_inverse_cdf(p, b, 500));
  SeededRng c(123, 4), d(123, 4);
  EXPECT_EQ(sample_rejection(p, c, 500), sample_rejection(p, d, 500));
}

TEST(MonteCarlo, CssDifferenceSpread) {
  RamseyConfig c;
  c.n_atoms = 50;
  const auto shots = monte_carlo_ramsey(c, 10000, SeededRng(8));
  EXPECT_NEAR(sample_stddev(pd_values(shots)), 5.0, 0.25);
  for (const auto& s : shots) {
    ASSERT_GE(s.m1, 0);
    ASSERT_LE(s.m2, 50);
    ASSERT_EQ(s.p_d, s.m2 - s.m1);
    ASSERT_DOUBLE_EQ(s.delta_est, s.p_d / 50.0);
  }
}

TEST(MonteCarlo, SingleTrial) {
  RamseyConfig c;
  c.n_atoms = 5;
  const auto shots = monte_carlo_ramsey(c, 1, SeededRng(1));
  ASSERT_EQ(shots.size(), 1u);
  EXPECT_GE(shots[0].m1, 0);
  EXPECT_LE(shots[0].m1, 5);
  EXPECT_THROW(monte_carlo_ramsey(c, 0, SeededRng(1)), InvalidArgument);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  RamseyConfig c;
  c.n_atoms = 12;
  c.preparation = PreparationSpec::squeezed(PreparationKind::sss1, 0.3, 1.2);
  set_default_threads(1);
  const auto serial = monte_carlo_ramsey(c, 3 * kMonteCarloChunk + 17, SeededRng(99));
  set_default_threads(4);
  const auto parallel = monte_carlo_ramsey(c, 3 * kMonteCarloChunk + 17, SeededRng(99));
  set_default_threads(0);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    ASSERT_EQ(serial[k].m1, parallel[k].m1);
    ASSERT_EQ(serial[k].m2, parallel[k].m2);
  }
}

TEST(MonteCarlo, MomentsMatchExactStatistics) {
  for (PreparationKind kind : {PreparationKind::css, PreparationKind::sss1, PreparationKind::sss2}) {
    RamseyConfig c;
    c.n_atoms = 20;
    if (kind != PreparationKind::css) c.preparation = PreparationSpec::squeezed(kind, 0.2, 1.4);
    const ProjectionStats exact = run_ramsey(c).stats;
    const std::size_t trials = 20000;
    for (SamplerMethod method : {SamplerMethod::inverse_cdf, SamplerMethod::rejection}) {
      const auto shots = monte_carlo_ramsey(c, trials, SeededRng(5), method);
      double mean = 0.0;
      for (const auto& s : shots) mean += s.p_d;
      mean /= trials;
      EXPECT_LT(std::abs(mean - exact.p_d), 4.0 * exact.dp_d / std::sqrt(trials) + 1e-12);
    }
  }
}

TEST(Histogram, Basics) {
  EXPECT_TRUE(histogram({}, 1.0).empty());
  const std::vector<double> one{3.0};
  const auto h1 = histogram(one, 1.0);
  ASSERT_EQ(h1.size(), 1u);
  EXPECT_EQ(h1[0].count, 1u);
  EXPECT_EQ(h1[0].center, 3.0);
  const std::vector<double> ints{-1, 0, 0, 2, 2, 2};
  const auto h = histogram(ints, 1.0);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0].count, 1u);
  EXPECT_EQ(h[1].count, 2u);
  EXPECT_EQ(h[2].count, 3u);
  std::size_t total = 0;
  for (const auto& b : histogram(ints, 2.5)) total += b.count;
  EXPECT_EQ(total, ints.size());
  EXPECT_THROW(histogram(ints, 0.0), InvalidArgument);
}
