#pragma once

// Single-shot Monte Carlo of the Ramsey readout.

#include "squeezelab/ramsey.hpp"
#include "squeezelab/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace squeezelab {

enum class SamplerMethod { inverse_cdf, rejection };

struct ShotSample {
  int m1 = 0;  // excitation count of pixel 1, in [0, N]
  int m2 = 0;
  int p_d = 0;  // m2 - m1
  double delta_est = 0.0;  // rad/s
};

// Rejection loop over a flattened distribution: with p_max the largest
// entry, pick a uniformly random outcome k (the head of a uniform shuffle),
// draw x in [0, 1) and accept k when x < p[k] / p_max. Slow for peaked
// distributions. Throws InvalidArgument unless the entries are
// non-negative and sum to 1 within 1e-9, or when count < 1.
std::vector<std::size_t> sample_rejection(std::span<const double> dist, SeededRng& rng,
                                          std::size_t count);

// Inverse-CDF sampling with a binary search over the cumulative sums.
std::vector<std::size_t> sample_inverse_cdf(std::span<const double> dist, SeededRng& rng,
                                            std::size_t count);

struct ExcitationCounts {
  int m1 = 0;
  int m2 = 0;
};

inline constexpr std::size_t kMonteCarloChunk = 4096;

// Draws (m1, m2) from the measured state in fixed-size chunks; chunk c uses
// rng.substream(c). Entangled states are sampled from p(M1, M2); product
// states sample each pixel from its own marginal.
std::vector<ExcitationCounts> sample_excitations(const TwoPixelState& state, std::size_t trials,
                                                 const SeededRng& rng,
                                                 SamplerMethod method = SamplerMethod::inverse_cdf);

// sample_excitations on the run_ramsey state, plus the Delta_eff estimate per
// shot. The output does not depend on the thread count.
std::vector<ShotSample> monte_carlo_ramsey(const RamseyConfig& config, std::size_t trials,
                                           const SeededRng& rng,
                                           SamplerMethod method = SamplerMethod::inverse_cdf);

struct HistogramBin {
  double center = 0.0;
  std::size_t count = 0;
};

// Bins of width bin_width centred on integer multiples of bin_width; only
// occupied bins are returned, ordered by centre.
std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width);

// Two-sample chi-squared test on outcome indices in [0, n_outcomes). Outcomes
// with fewer than 10 combined counts are pooled into one bin. Returns the
// upper-tail p-value.
double chi_squared_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b,
                              std::size_t n_outcomes);

}  // namespace squeezelab
