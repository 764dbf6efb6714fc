#pragma once

// Synchronous differential Ramsey sequence: preparation, free evolution with
// pixel phases phi +/- delta (delta = delta_eff * t_free), and a collective
// pi/2 pulse about x. With these conventions a CSS gives
// P1/N = 1/2 + 1/2 cos(phi + delta) and P2/N = 1/2 + 1/2 cos(phi - delta).

#include "squeezelab/two_pixel.hpp"

#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace squeezelab {

// 2 pi x 519 THz.
inline constexpr double kClockOmega0 = 2.0 * std::numbers::pi * 519e12;

struct RamseyConfig {
  int n_atoms = 50;
  PreparationSpec preparation{};
  double phi = std::numbers::pi / 2;  // phase difference between the pulses
  double delta_eff = 0.0;             // rad/s, +delta_eff on pixel 1, -delta_eff on pixel 2
  double t_free = 1.0;                // s
  double t_cycle = 1.0;               // s
  double contrast = 1.0;
  double omega0 = kClockOmega0;       // rad/s

  double delta() const noexcept { return delta_eff * t_free; }
  void validate() const;
};

// exp(-i (phi + delta) Jz1) (x) exp(-i (phi - delta) Jz2).
TwoPixelState free_evolution(const TwoPixelState& state, double phi, double delta);

// Free evolution followed by the second pulse exp(-i pi/2 (Jx1 + Jx2)).
TwoPixelState ramsey_readout(const TwoPixelState& prepared, double phi, double delta);

// Full step list from ground (x) ground to the measured state.
Pipeline ramsey_pipeline(const PreparationSpec& spec, double phi, double delta);

struct RamseyResult {
  TwoPixelState state;  // after the second pulse
  ProjectionStats stats;
};

RamseyResult run_ramsey(const RamseyConfig& config);

struct ExcitationPoint {
  double phi;
  double p1_frac;   // P1 / N
  double p2_frac;   // P2 / N
  double dp1_frac;  // dP1 / N
  double dp2_frac;  // dP2 / N
};

// One Ramsey evaluation per phase; the preparation is computed once.
std::vector<ExcitationPoint> excitation_curve(const RamseyConfig& config,
                                              std::span<const double> phi_grid);

// Single ensemble of N spins: ground -> pi/2 pulse -> exp(-i phi Jz) -> pi/2 pulse.
PixelState single_ensemble_state(int n_atoms, double phi);

struct SingleEnsemblePoint {
  double phi;
  double p_frac;   // P / N
  double dp;       // dP
};

std::vector<SingleEnsemblePoint> single_ensemble_curve(int n_atoms, std::span<const double> phi_grid);

struct EllipseGeometry {
  double a = 0.0;            // semi-major axis, excitation-fraction units
  double b = 0.0;            // semi-minor axis
  double e = 0.0;            // b / a
  double orientation = 0.0;  // +pi/4 or -pi/4
};

// Closed form for delta in [0, pi/2]: semi-axes (C/sqrt2) cos(delta) along
// +45 deg and (C/sqrt2) sin(delta) along -45 deg.
EllipseGeometry ellipse_geometry(double delta, double contrast = 1.0);

// Estimates the geometry from (P1/N, P2/N) samples taken at phases evenly
// spaced over one full period: the centered samples are projected onto the
// +/-45 deg axes and each amplitude is sqrt(2 <u^2>). Needs >= 8 samples;
// throws FitFailure when the samples do not span an ellipse.
EllipseGeometry fit_ellipse(std::span<const std::pair<double, double>> samples);

// Delta_eff = P_d / (N T sin(phi)); throws SingularConfigurationError when
// |sin(phi)| < 1e-6.
double estimate_delta_eff(double p_d, int n_atoms, double t_free, double phi);

// sigma(Delta_eff) = dP_d / (N T).
double sensitivity(const ProjectionStats& stats, int n_atoms, double t_free);

}  // namespace squeezelab
