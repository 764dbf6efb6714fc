#include "squeezelab/allan.hpp"
#include "squeezelab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace squeezelab;

namespace {

FrequencySeries white_series(std::size_t length, double s, std::uint64_t seed) {
  SeededRng rng(seed);
  std::normal_distribution<double> g(0.0, s);
  FrequencySeries series;
  series.values.resize(length);
  for (double& v : series.values) v = g(rng);
  return series;
}

}  // namespace

TEST(Allan, ConstantSeriesHasZeroDeviation) {
  FrequencySeries s;
  s.values.assign(64, 0.37);
  const std::vector<std::size_t> n{1, 2, 4, 8};
  for (const auto& p : allan_deviation(s, n).points) EXPECT_EQ(p.sigma_y, 0.0);
}

TEST(Allan, AlternatingSeries) {
  FrequencySeries s;
  s.omega0 = 10.0;
  for (int k = 0; k < 100; ++k) s.values.push_back(k % 2 ? 0.3 : -0.3);
  const std::vector<std::size_t> n{1};
  EXPECT_NEAR(allan_deviation(s, n, AllanEstimator::non_overlapping, AllanNormalization::mean_square).points[0].sigma_y,
              2 * 0.3 / 10.0, 1e-15);
  EXPECT_NEAR(allan_deviation(s, n).points[0].sigma_y, std::sqrt(2.0) * 0.3 / 10.0, 1e-15);
}

TEST(Allan, TausAndPairs) {
  FrequencySeries s = white_series(100, 1.0, 1);
  s.t_cycle = 0.5;
  const std::vector<std::size_t> n{1, 3, 50};
  const AllanCurve c = allan_deviation(s, n);
  EXPECT_DOUBLE_EQ(c.points[1].tau, 1.5);
  EXPECT_EQ(c.points[0].pairs, 99u);
  EXPECT_EQ(c.points[1].pairs, 32u);
  EXPECT_EQ(c.points[2].pairs, 1u);
  EXPECT_EQ(allan_deviation(s, std::vector<std::size_t>{3}, AllanEstimator::overlapping).points[0].pairs, 95u);
}

TEST(Allan, RejectsBadInput) {
  FrequencySeries s = white_series(10, 1.0, 1);
  EXPECT_THROW(allan_deviation(s, std::vector<std::size_t>{6}), InvalidArgument);
  EXPECT_THROW(allan_deviation(s, std::vector<std::size_t>{0}), InvalidArgument);
  FrequencySeries shorty;
  shorty.values = {1.0};
  EXPECT_THROW(allan_deviation(shorty, std::vector<std::size_t>{1}), InvalidArgument);
}

TEST(Allan, WhiteNoiseScaling) {
  const double s = 0.1;
  FrequencySeries series = white_series(100000, s, 42);
  const AllanCurve curve = allan_deviation(series, default_ladder(series.values.size()));
  EXPECT_NEAR(fit_white_noise(curve) / (s / series.omega0), 1.0, 0.1);

  const std::vector<std::size_t> n{1, 2, 4, 8, 16, 32, 64};
  const AllanCurve sub = allan_deviation(series, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : sub.points) {
    const double x = std::log(p.tau), y = std::log(p.sigma_y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(sub.points.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(Allan, OverlappingEstimatorAgreesOnWhiteNoise) {
  FrequencySeries series = white_series(20000, 1.0, 3);
  const auto ladder = default_ladder(series.values.size());
  const double a = fit_white_noise(allan_deviation(series, ladder));
  const double b = fit_white_noise(allan_deviation(series, ladder, AllanEstimator::overlapping));
  EXPECT_NEAR(a / b, 1.0, 0.1);
}

TEST(Allan, DefaultLadder) {
  EXPECT_EQ(default_ladder(100), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(default_ladder(10), (std::vector<std::size_t>{1}));
  EXPECT_EQ(default_ladder(100000).back(), 8192u);
}

TEST(Fit, ExactDataAndErrors) {
  AllanCurve c;
  for (double tau : {1.0, 2.0, 4.0, 8.0}) c.points.push_back({tau, 3e-17 / std::sqrt(tau), 10});
  EXPECT_NEAR(fit_white_noise(c) / 3e-17, 1.0, 1e-9);
  AllanCurve unweighted = c;
  for (auto& p : unweighted.points) p.pairs = 0;
  EXPECT_NEAR(fit_white_noise(unweighted) / 3e-17, 1.0, 1e-9);
  c.points.resize(2);
  EXPECT_THROW(fit_white_noise(c), InvalidArgument);
  c.points.push_back({4.0, 0.0, 10});
  EXPECT_THROW(fit_white_noise(c), InvalidArgument);
}

TEST(Fit, WeightsByPairCount) {
  AllanCurve c;
  c.points = {{1.0, 1.0, 1000}, {2.0, 1.0 / std::sqrt(2.0), 1000}, {4.0, 10.0, 1}};
  const double expected = std::exp((1000 * 0.0 + 1000 * 0.0 + std::log(20.0)) / 2001.0);
  EXPECT_NEAR(fit_white_noise(c), expected, 1e-12);
}

TEST(Analytic, Values) {
  const double omega0 = 2 * std::numbers::pi * 519e12;
  EXPECT_NEAR(analytic_allan(5.0, 50, 1.0, 1.0, omega0), std::sqrt(25.0) / (50 * omega0), 1e-30);
  EXPECT_DOUBLE_EQ(analytic_allan(2.5, 50, 1.0, 1.0) * 2, analytic_allan(5.0, 50, 1.0, 1.0));
  EXPECT_NEAR(analytic_allan(5.0, 50, 1.0, 4.0) / analytic_allan(5.0, 50, 1.0, 1.0), 2.0, 1e-14);
}

TEST(Redshift, Values) {
  EXPECT_EQ(redshift_fraction(0.0), 0.0);
  EXPECT_NEAR(redshift_fraction(1.0), 9.80665 / (299792458.0 * 299792458.0), 1e-30);
  EXPECT_NEAR(redshift_fraction(1.0) / 1.091e-16, 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(resolution_time(3e-19, 3e-19), 1.0);
  EXPECT_DOUBLE_EQ(resolution_time(6e-19, 3e-19) / resolution_time(3e-19, 3e-19), 4.0);
}

TEST(SimulateSeries, CssSpread) {
  RamseyConfig c;
  c.n_atoms = 50;
  const FrequencySeries s = simulate_series(c, 10000, SeededRng(17));
  ASSERT_EQ(s.values.size(), 10000u);
  double mean = 0, var = 0;
  for (double v : s.values) mean += v;
  mean /= 10000;
  for (double v : s.values) var += (v - mean) * (v - mean);
  EXPECT_NEAR(std::sqrt(var / 9999), 0.1, 0.005);
  EXPECT_THROW(simulate_series(c, 1, SeededRng(1)), InvalidArgument);
}

TEST(SimulateSeries, NoiselessStateGivesConstantSeries) {
  RamseyConfig c;
  c.n_atoms = 1;
  c.preparation = PreparationSpec::squeezed(PreparationKind::sss1, std::numbers::pi / 2, std::numbers::pi / 4);
  ASSERT_LT(run_ramsey(c).stats.dp_d, 1e-12);
  const FrequencySeries s = simulate_series(c, 500, SeededRng(2));
  for (double v : s.values) ASSERT_EQ(v, s.values.front());
}
