#pragma once

#include "squeezelab/ramsey.hpp"
#include "squeezelab/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace squeezelab {

struct FrequencySeries {
  std::vector<double> values;  // Delta_eff estimate per cycle, rad/s
  double t_cycle = 1.0;        // s
  double omega0 = kClockOmega0;

  // Requires >= 2 values, t_cycle > 0 and omega0 > 0.
  void validate() const;
};

struct AllanPoint {
  double tau = 0.0;  // s
  double sigma_y = 0.0;
  std::size_t pairs = 0;  // differences averaged
};

struct AllanCurve {
  std::vector<AllanPoint> points;
  std::optional<double> fit_coefficient;  // A in sigma_y = A / sqrt(tau)
};

enum class AllanEstimator { non_overlapping, overlapping };

// half_mean_square: sigma_y^2 = <(dbar_{m+1} - dbar_m)^2> / (2 omega0^2),
// the usual two-sample variance. mean_square drops the 1/2.
enum class AllanNormalization { half_mean_square, mean_square };

// One Monte Carlo shot per cycle, each turned into a Delta_eff estimate.
FrequencySeries simulate_series(const RamseyConfig& config, std::size_t cycles, const SeededRng& rng);

// Powers of two up to floor(cycles / 8); {1} for short series.
std::vector<std::size_t> default_ladder(std::size_t cycles);

// Block averages of n consecutive cycles, tau = n * t_cycle. Throws
// InvalidArgument when some n is 0 or exceeds length / 2.
AllanCurve allan_deviation(const FrequencySeries& series, std::span<const std::size_t> n_list,
                           AllanEstimator estimator = AllanEstimator::non_overlapping,
                           AllanNormalization normalization = AllanNormalization::half_mean_square);

// Least squares of ln sigma_y against ln tau with slope fixed at -1/2,
// weighting each point by its number of pairs (equal weights if any point
// has pairs == 0). Points with sigma_y = 0 are skipped. Throws
// InvalidArgument for fewer than 3 usable points.
double fit_white_noise(const AllanCurve& curve);

// A = dP_d / (N T omega0) * sqrt(T_c).
double analytic_allan(double dp_d, int n_atoms, double t_free, double t_cycle,
                      double omega0 = kClockOmega0);

inline constexpr double kStandardGravity = 9.80665;     // m/s^2
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s

// g dh / c^2.
double redshift_fraction(double height_difference, double g = kStandardGravity,
                         double c = kSpeedOfLight);

// Averaging time at which A / sqrt(tau) reaches target_fraction: (A / target)^2.
double resolution_time(double a, double target_fraction);

}  // namespace squeezelab
