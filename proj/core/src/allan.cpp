#include "squeezelab/allan.hpp"

#include "squeezelab/errors.hpp"
#include "squeezelab/sampler.hpp"

#include <cmath>
#include <string>

namespace squeezelab {

void FrequencySeries::validate() const {
  if (values.size() < 2) throw InvalidArgument("frequency series needs at least 2 values");
  if (!(t_cycle > 0.0)) throw InvalidArgument("t_cycle must be > 0");
  if (!(omega0 > 0.0)) throw InvalidArgument("omega0 must be > 0");
}

FrequencySeries simulate_series(const RamseyConfig& config, std::size_t cycles, const SeededRng& rng) {
  if (cycles < 2) throw InvalidArgument("cycles must be >= 2");
  const std::vector<ShotSample> shots = monte_carlo_ramsey(config, cycles, rng);
  FrequencySeries series;
  series.t_cycle = config.t_cycle;
  series.omega0 = config.omega0;
  series.values.reserve(shots.size());
  for (const ShotSample& s : shots) series.values.push_back(s.delta_est);
  return series;
}

std::vector<std::size_t> default_ladder(std::size_t cycles) {
  std::vector<std::size_t> ladder{1};
  for (std::size_t n = 2; n <= cycles / 8; n *= 2) ladder.push_back(n);
  return ladder;
}

AllanCurve allan_deviation(const FrequencySeries& series, std::span<const std::size_t> n_list,
                           AllanEstimator estimator, AllanNormalization normalization) {
  series.validate();
  const std::vector<double>& y = series.values;
  const std::size_t length = y.size();
  std::vector<double> prefix(length + 1, 0.0);
  for (std::size_t k = 0; k < length; ++k) prefix[k + 1] = prefix[k] + y[k];
  auto block_mean = [&](std::size_t start, std::size_t n) {
    if (estimator == AllanEstimator::overlapping) {
      return (prefix[start + n] - prefix[start]) / static_cast<double>(n);
    }
    double sum = 0.0;
    for (std::size_t k = start; k < start + n; ++k) sum += y[k];
    return sum / static_cast<double>(n);
  };
  const double norm = normalization == AllanNormalization::half_mean_square ? 0.5 : 1.0;

  AllanCurve curve;
  curve.points.reserve(n_list.size());
  for (std::size_t n : n_list) {
    if (n == 0 || n > length / 2) {
      throw InvalidArgument("averaging factor n=" + std::to_string(n) + " must lie in [1, " +
                            std::to_string(length / 2) + "]");
    }
    const std::size_t step = estimator == AllanEstimator::non_overlapping ? n : 1;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t start = 0; start + 2 * n <= length; start += step) {
      const double d = block_mean(start + n, n) - block_mean(start, n);
      sum += d * d;
      ++pairs;
    }
    const double sigma = std::sqrt(norm * sum / static_cast<double>(pairs)) / series.omega0;
    curve.points.push_back({static_cast<double>(n) * series.t_cycle, sigma, pairs});
  }
  return curve;
}

double fit_white_noise(const AllanCurve& curve) {
  bool weighted = true;
  for (const AllanPoint& p : curve.points) weighted = weighted && p.pairs > 0;
  double acc = 0.0, total = 0.0;
  std::size_t used = 0;
  for (const AllanPoint& p : curve.points) {
    if (!(p.sigma_y > 0.0) || !(p.tau > 0.0)) continue;
    const double w = weighted ? static_cast<double>(p.pairs) : 1.0;
    acc += w * (std::log(p.sigma_y) + 0.5 * std::log(p.tau));
    total += w;
    ++used;
  }
  if (used < 3) throw InvalidArgument("white-noise fit needs at least 3 points with sigma_y > 0");
  return std::exp(acc / total);
}

double analytic_allan(double dp_d, int n_atoms, double t_free, double t_cycle, double omega0) {
  return dp_d / (n_atoms * t_free * omega0) * std::sqrt(t_cycle);
}

double redshift_fraction(double height_difference, double g, double c) {
  return g * height_difference / (c * c);
}

double resolution_time(double a, double target_fraction) {
  const double r = a / target_fraction;
  return r * r;
}

}  // namespace squeezelab
