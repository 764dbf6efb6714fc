#pragma once

// Scans and minimization of the differential projection noise over the
// twisting angles (alpha, beta), and the single-ensemble phase sensitivity.

#include "squeezelab/two_pixel.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace squeezelab {

struct AngleGrid {
  int n_alpha = 256;  // alpha_i = 2 pi i / n_alpha, i in [0, n_alpha)
  int n_beta = 256;

  void validate() const;  // both >= 2
  double alpha(int i) const noexcept { return 2.0 * std::numbers::pi * i / n_alpha; }
  double beta(int j) const noexcept { return 2.0 * std::numbers::pi * j / n_beta; }
  double alpha_step() const noexcept { return 2.0 * std::numbers::pi / n_alpha; }
  double beta_step() const noexcept { return 2.0 * std::numbers::pi / n_beta; }
};

// Noise figures after the second pulse at phase phi with delta = 0.
struct NoisePoint {
  double dp_total = 0.0;
  double dp_pixel = 0.0;  // dP1 (= dP2 for both preparations)
  double dp_d = 0.0;
};

// Evaluates NoisePoint(alpha, beta) without running the step-by-step
// pipeline: the twisted state is rotated once per alpha, after which each
// beta only needs diagonal phases and one tridiagonal observable. Not
// thread-safe; use one instance per task.
class NoiseEvaluator {
 public:
  NoiseEvaluator(PreparationKind kind, int n_atoms, double phi = std::numbers::pi / 2);

  void set_alpha(double alpha);
  NoisePoint at_beta(double beta) const;
  NoisePoint operator()(double alpha, double beta);

  PreparationKind kind() const noexcept { return kind_; }
  int n_atoms() const noexcept { return space_.n_atoms(); }

 private:
  PreparationKind kind_;
  DickeSpace space_;
  Eigen::VectorXcd css_;
  Eigen::VectorXcd up_;    // sub-diagonal of the measured observable
  Eigen::VectorXcd down_;  // super-diagonal
  Eigen::VectorXd diag_;
  std::shared_ptr<const Eigen::MatrixXcd> unrotate_;  // exp(+i pi/2 Jx)
  Eigen::VectorXcd pixel_;  // SSS2
  Eigen::MatrixXcd joint_;  // SSS1
  std::optional<double> alpha_;
};

struct NoiseMap {
  AngleGrid grid;
  PreparationKind kind = PreparationKind::sss1;
  int n_atoms = 0;
  double phi = std::numbers::pi / 2;
  Eigen::MatrixXd dp_total;  // n_alpha x n_beta
  Eigen::MatrixXd dp_pixel;
  Eigen::MatrixXd dp_d;
};

// kind must be sss1 or sss2. SSS1 needs N <= kMaxDenseJointAtoms
// (ResourceLimitError otherwise).
NoiseMap scan_noise_map(PreparationKind kind, int n_atoms, const AngleGrid& grid,
                        double phi = std::numbers::pi / 2);

struct MinResult {
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double value = 0.0;
  double grid_value = 0.0;
  double ratio_to_css = 1.0;
  double gain_db = 0.0;         // 10 log10(1 / ratio)
  double time_reduction = 1.0;  // ratio^-2
};

// Coordinate-wise bounded refinement within one grid cell of the grid
// minimum, stopping at 1e-6 rad. Ties on the grid go to the smallest alpha,
// then the smallest beta.
MinResult minimize_dpd(PreparationKind kind, int n_atoms, const AngleGrid& grid = {},
                       bool refine = true);

struct SweepRow {
  int n_atoms = 0;
  MinResult min;
};

std::vector<SweepRow> sweep_n(PreparationKind kind, const std::vector<int>& n_list,
                              const AngleGrid& grid = {}, bool refine = true);

// dphi = dJx / |<Jz>| on exp(+i pi/2 Jx) psi, with psi the single-ensemble
// state exp(-i (beta - pi/2) Jy) exp(-i alpha Jz^2) CSS(pi/2, x).
// Throws SingularConfigurationError when |<Jz>| < 1e-12.
double phase_sensitivity(int n_atoms, double alpha, double beta);

struct PhaseMinResult {
  MinResult min;       // ratio_to_css is relative to 1/sqrt(N)
  double ratio_to_hl;  // relative to 1/N
};

// Minimum of phase_sensitivity over the grid (or over beta only when
// fixed_alpha is set), refined as in minimize_dpd. Singular points are
// skipped.
PhaseMinResult minimize_phase_sensitivity(int n_atoms, const AngleGrid& grid = {},
                                          std::optional<double> fixed_alpha = std::nullopt,
                                          bool refine = true);

// Delta phi along beta at a fixed alpha; NaN where singular.
std::vector<double> phase_sensitivity_curve(int n_atoms, double alpha,
                                            const std::vector<double>& betas);

}  // namespace squeezelab
