#include "squeezelab/ramsey.hpp"

#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"

#include <cmath>
#include <optional>

namespace squeezelab {
namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

void RamseyConfig::validate() const {
  if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
  preparation.validate();
  if (!(t_free > 0.0)) throw InvalidArgument("t_free must be > 0");
  if (!(t_cycle >= t_free)) throw InvalidArgument("t_cycle must be >= t_free");
  if (!(contrast > 0.0 && contrast <= 1.0)) throw InvalidArgument("contrast must be in (0, 1]");
  if (!(omega0 > 0.0)) throw InvalidArgument("omega0 must be > 0");
  if (!std::isfinite(phi) || !std::isfinite(delta_eff)) throw InvalidArgument("phi and delta_eff must be finite");
}

TwoPixelState free_evolution(const TwoPixelState& state, double phi, double delta) {
  return pixel_phases(state, phi + delta, phi - delta);
}

TwoPixelState ramsey_readout(const TwoPixelState& prepared, double phi, double delta) {
  return collective_rotate(free_evolution(prepared, phi, delta), Vec3::UnitX(), kHalfPi);
}

Pipeline ramsey_pipeline(const PreparationSpec& spec, double phi, double delta) {
  Pipeline steps = preparation_pipeline(spec);
  steps.emplace_back(PixelPhases{phi + delta, phi - delta});
  steps.emplace_back(CollectiveRotation{Vec3::UnitX(), kHalfPi});
  return steps;
}

RamseyResult run_ramsey(const RamseyConfig& config) {
  config.validate();
  TwoPixelState final_state =
      ramsey_readout(prepare(config.preparation, config.n_atoms), config.phi, config.delta());
  ProjectionStats stats = projection_stats(final_state);
  return {std::move(final_state), stats};
}

std::vector<ExcitationPoint> excitation_curve(const RamseyConfig& config,
                                              std::span<const double> phi_grid) {
  config.validate();
  if (phi_grid.empty()) throw InvalidArgument("phase grid is empty");
  const TwoPixelState prepared = prepare(config.preparation, config.n_atoms);
  const double n = config.n_atoms;
  std::vector<std::optional<ExcitationPoint>> slots(phi_grid.size());
  parallel_for(phi_grid.size(), 0, [&](std::size_t k) {
    const ProjectionStats s =
        projection_stats(ramsey_readout(prepared, phi_grid[k], config.delta()));
    slots[k] = ExcitationPoint{phi_grid[k], s.p1 / n, s.p2 / n, s.dp1 / n, s.dp2 / n};
  });
  std::vector<ExcitationPoint> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(*s);
  return out;
}

PixelState single_ensemble_state(int n_atoms, double phi) {
  const DickeSpace space(n_atoms);
  PixelState psi = rotate(ground_state(space), Axis::x, kHalfPi);
  psi = z_phase(psi, phi);
  return rotate(psi, Axis::x, kHalfPi);
}

std::vector<SingleEnsemblePoint> single_ensemble_curve(int n_atoms, std::span<const double> phi_grid) {
  if (phi_grid.empty()) throw InvalidArgument("phase grid is empty");
  std::vector<SingleEnsemblePoint> out;
  out.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    const Moments m = excitation_stats(single_ensemble_state(n_atoms, phi));
    out.push_back({phi, m.mean / n_atoms, m.stddev});
  }
  return out;
}

EllipseGeometry ellipse_geometry(double delta, double contrast) {
  if (!(delta >= 0.0 && delta <= kHalfPi)) throw InvalidArgument("delta must lie in [0, pi/2]");
  if (!(contrast > 0.0 && contrast <= 1.0)) throw InvalidArgument("contrast must be in (0, 1]");
  const double along_plus = contrast / std::numbers::sqrt2 * std::cos(delta);
  const double along_minus = contrast / std::numbers::sqrt2 * std::sin(delta);
  EllipseGeometry g;
  g.a = std::max(along_plus, along_minus);
  g.b = std::min(along_plus, along_minus);
  g.e = g.a > 0.0 ? g.b / g.a : 0.0;
  g.orientation = delta <= std::numbers::pi / 4 ? std::numbers::pi / 4 : -std::numbers::pi / 4;
  return g;
}

EllipseGeometry fit_ellipse(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 8) throw FitFailure("ellipse fit needs at least 8 samples");
  double cx = 0.0, cy = 0.0;
  for (const auto& [x, y] : samples) {
    cx += x;
    cy += y;
  }
  cx /= static_cast<double>(samples.size());
  cy /= static_cast<double>(samples.size());
  double uu = 0.0, vv = 0.0;
  for (const auto& [x, y] : samples) {
    const double u = ((x - cx) + (y - cy)) / std::numbers::sqrt2;
    const double v = ((y - cy) - (x - cx)) / std::numbers::sqrt2;
    uu += u * u;
    vv += v * v;
  }
  uu /= static_cast<double>(samples.size());
  vv /= static_cast<double>(samples.size());
  const double amp_plus = std::sqrt(2.0 * uu);
  const double amp_minus = std::sqrt(2.0 * vv);
  EllipseGeometry g;
  g.a = std::max(amp_plus, amp_minus);
  g.b = std::min(amp_plus, amp_minus);
  if (!(g.a > 1e-12)) throw FitFailure("samples do not span an ellipse");
  g.e = g.b / g.a;
  g.orientation = amp_plus >= amp_minus ? std::numbers::pi / 4 : -std::numbers::pi / 4;
  return g;
}

double estimate_delta_eff(double p_d, int n_atoms, double t_free, double phi) {
  const double s = std::sin(phi);
  if (std::abs(s) < 1e-6) {
    throw SingularConfigurationError("estimator undefined: |sin(phi)| < 1e-6");
  }
  return p_d / (n_atoms * t_free * s);
}

double sensitivity(const ProjectionStats& stats, int n_atoms, double t_free) {
  return stats.dp_d / (n_atoms * t_free);
}

}  // namespace squeezelab
