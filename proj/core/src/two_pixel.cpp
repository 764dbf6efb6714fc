#include "squeezelab/two_pixel.hpp"

#include "squeezelab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace squeezelab {
namespace {

void require_dense_capacity(const DickeSpace& space) {
  if (space.n_atoms() > kMaxDenseJointAtoms) {
    throw ResourceLimitError("dense joint state requested for N=" +
                             std::to_string(space.n_atoms()) + "; the limit is " +
                             std::to_string(kMaxDenseJointAtoms));
  }
}

std::shared_ptr<const Eigen::MatrixXcd> rotation_for(const DickeSpace& space, const Vec3& n,
                                                     double angle) {
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    if ((n - unit_vector(axis)).norm() < 1e-15) return RotationCache::global().get(space, axis, angle);
  }
  return std::make_shared<const Eigen::MatrixXcd>(rotation_matrix(space, n, angle));
}

Eigen::MatrixXcd renormalized(Eigen::MatrixXcd x) {
  const double n = x.norm();
  if (std::abs(n - 1.0) > 1e-10) x /= n;
  return x;
}

// Elementwise diagonal phase exp(-i f(M1, M2)).
template <typename Phase>
Eigen::MatrixXcd apply_diagonal(const TwoPixelState& state, Phase phase) {
  const DickeSpace& space = state.space();
  Eigen::MatrixXcd x = state.amplitudes();
  for (int j = 0; j < space.dim(); ++j) {
    for (int i = 0; i < space.dim(); ++i) x(i, j) *= std::polar(1.0, -phase(space.m(i), space.m(j)));
  }
  return renormalized(std::move(x));
}

}  // namespace

std::string_view to_string(PreparationKind kind) {
  switch (kind) {
    case PreparationKind::css: return "css";
    case PreparationKind::sss1: return "sss1";
    case PreparationKind::sss2: return "sss2";
  }
  return "css";
}

PreparationKind parse_preparation_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "css") return PreparationKind::css;
  if (lower == "sss1") return PreparationKind::sss1;
  if (lower == "sss2") return PreparationKind::sss2;
  throw InvalidArgument("unknown preparation kind '" + std::string(text) +
                        "'; expected one of {css, sss1, sss2}");
}

PreparationSpec PreparationSpec::coherent(double theta, const Vec3& axis) {
  PreparationSpec spec;
  spec.kind = PreparationKind::css;
  spec.theta = theta;
  spec.axis = axis;
  return spec;
}

PreparationSpec PreparationSpec::squeezed(PreparationKind kind, double alpha, double beta) {
  PreparationSpec spec;
  spec.kind = kind;
  spec.alpha = alpha;
  spec.beta = beta;
  return spec;
}

void PreparationSpec::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("preparation angles must be finite");
  }
  if (kind == PreparationKind::css && std::abs(axis.norm() - 1.0) > 1e-9) {
    throw InvalidArgument("CSS axis must be a unit vector");
  }
}

TwoPixelState::TwoPixelState(DickeSpace space, std::optional<std::array<PixelState, 2>> factors,
                             std::shared_ptr<LazyJoint> joint)
    : space_(std::move(space)), factors_(std::move(factors)), joint_(std::move(joint)) {}

TwoPixelState TwoPixelState::product(PixelState psi1, PixelState psi2) {
  if (!(psi1.space() == psi2.space())) {
    throw InvalidArgument("pixels must have the same atom number (got " +
                          std::to_string(psi1.space().n_atoms()) + " and " +
                          std::to_string(psi2.space().n_atoms()) + ")");
  }
  DickeSpace space = psi1.space();
  return TwoPixelState(std::move(space),
                       std::array<PixelState, 2>{std::move(psi1), std::move(psi2)},
                       std::make_shared<LazyJoint>());
}

TwoPixelState TwoPixelState::dense(DickeSpace space, Eigen::MatrixXcd amplitudes) {
  require_dense_capacity(space);
  if (amplitudes.rows() != space.dim() || amplitudes.cols() != space.dim()) {
    throw InvalidArgument("joint amplitude matrix has the wrong shape");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw InvalidArgument("joint state is not normalized");
  auto joint = std::make_shared<LazyJoint>();
  std::call_once(joint->once, [&] { joint->value = std::move(amplitudes); });
  return TwoPixelState(std::move(space), std::nullopt, std::move(joint));
}

const PixelState& TwoPixelState::pixel(int k) const {
  if (!factors_) throw InvalidArgument("entangled two-pixel state has no pixel factors");
  if (k != 1 && k != 2) throw InvalidArgument("pixel index must be 1 or 2");
  return (*factors_)[static_cast<std::size_t>(k - 1)];
}

const Eigen::MatrixXcd& TwoPixelState::amplitudes() const {
  std::call_once(joint_->once, [this] {
    const auto& f = *factors_;
    joint_->value = f[0].amplitudes() * f[1].amplitudes().transpose();
  });
  return joint_->value;
}

double TwoPixelState::norm() const {
  if (factors_) return (*factors_)[0].norm() * (*factors_)[1].norm();
  return amplitudes().norm();
}

TwoPixelState tensor(const PixelState& psi1, const PixelState& psi2) {
  return TwoPixelState::product(psi1, psi2);
}

TwoPixelState collective_rotate(const TwoPixelState& state, const Vec3& axis_vector, double angle) {
  if (std::abs(axis_vector.norm() - 1.0) > 1e-9) throw InvalidArgument("rotation axis must be a unit vector");
  if (state.is_product()) {
    return TwoPixelState::product(rotate(state.pixel(1), axis_vector, angle),
                                  rotate(state.pixel(2), axis_vector, angle));
  }
  const auto u = rotation_for(state.space(), axis_vector, angle);
  Eigen::MatrixXcd x = (*u) * state.amplitudes() * u->transpose();
  return TwoPixelState::dense(state.space(), renormalized(std::move(x)));
}

TwoPixelState global_oat(const TwoPixelState& state, double alpha) {
  require_dense_capacity(state.space());
  return TwoPixelState::dense(
      state.space(), apply_diagonal(state, [alpha](double m1, double m2) {
        return alpha * (m1 + m2) * (m1 + m2);
      }));
}

TwoPixelState local_oat(const TwoPixelState& state, double alpha) {
  if (state.is_product()) {
    return TwoPixelState::product(oat_evolve(state.pixel(1), alpha), oat_evolve(state.pixel(2), alpha));
  }
  return TwoPixelState::dense(state.space(), apply_diagonal(state, [alpha](double m1, double m2) {
                                return alpha * (m1 * m1 + m2 * m2);
                              }));
}

TwoPixelState pixel_phases(const TwoPixelState& state, double phase1, double phase2) {
  if (state.is_product()) {
    return TwoPixelState::product(z_phase(state.pixel(1), phase1), z_phase(state.pixel(2), phase2));
  }
  return TwoPixelState::dense(state.space(), apply_diagonal(state, [=](double m1, double m2) {
                                return phase1 * m1 + phase2 * m2;
                              }));
}

Pipeline preparation_pipeline(const PreparationSpec& spec) {
  spec.validate();
  constexpr double half_pi = std::numbers::pi / 2;
  switch (spec.kind) {
    case PreparationKind::css:
      return {CollectiveRotation{spec.axis, spec.theta}};
    case PreparationKind::sss1:
      return {CollectiveRotation{Vec3::UnitX(), half_pi}, GlobalTwist{spec.alpha},
              CollectiveRotation{Vec3::UnitY(), spec.beta - half_pi}};
    case PreparationKind::sss2:
      return {CollectiveRotation{Vec3::UnitX(), half_pi}, LocalTwist{spec.alpha},
              CollectiveRotation{Vec3::UnitY(), spec.beta - half_pi}};
  }
  throw InvalidArgument("invalid preparation kind");
}

TwoPixelState apply_pipeline(const TwoPixelState& state, const Pipeline& pipeline) {
  TwoPixelState current = state;
  for (const PipelineStep& step : pipeline) {
    current = std::visit(
        [&current](const auto& op) -> TwoPixelState {
          using Op = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<Op, CollectiveRotation>) {
            return collective_rotate(current, op.axis, op.angle);
          } else if constexpr (std::is_same_v<Op, GlobalTwist>) {
            return global_oat(current, op.alpha);
          } else if constexpr (std::is_same_v<Op, LocalTwist>) {
            return local_oat(current, op.alpha);
          } else {
            return pixel_phases(current, op.phase1, op.phase2);
          }
        },
        step);
  }
  return current;
}

TwoPixelState prepare(const PreparationSpec& spec, int n_atoms) {
  const DickeSpace space(n_atoms);
  const TwoPixelState ground = tensor(ground_state(space), ground_state(space));
  return apply_pipeline(ground, preparation_pipeline(spec));
}

Eigen::MatrixXd joint_distribution(const TwoPixelState& state) {
  return state.amplitudes().cwiseAbs2();
}

ProjectionStats projection_stats(const DickeSpace& space, const Eigen::MatrixXd& p) {
  const int dim = space.dim();
  const Eigen::VectorXd count = space.m_values().array() + space.j();
  const Eigen::VectorXd marginal1 = p.rowwise().sum();
  const Eigen::VectorXd marginal2 = p.colwise().sum().transpose();

  ProjectionStats s;
  s.p1 = marginal1.dot(count);
  s.p2 = marginal2.dot(count);
  s.p_total = s.p1 + s.p2;
  s.p_d = s.p2 - s.p1;
  double v1 = 0.0, v2 = 0.0, cov = 0.0, vt = 0.0, vd = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double x2 = count[j] - s.p2;
    for (int i = 0; i < dim; ++i) {
      const double w = p(i, j);
      if (w == 0.0) continue;
      const double x1 = count[i] - s.p1;
      v1 += w * x1 * x1;
      v2 += w * x2 * x2;
      cov += w * x1 * x2;
      vt += w * (x1 + x2) * (x1 + x2);
      vd += w * (x2 - x1) * (x2 - x1);
    }
  }
  s.dp1 = std::sqrt(std::max(v1, 0.0));
  s.dp2 = std::sqrt(std::max(v2, 0.0));
  s.dp_total = std::sqrt(std::max(vt, 0.0));
  s.dp_d = std::sqrt(std::max(vd, 0.0));
  s.g = cov;
  return s;
}

ProjectionStats projection_stats(const TwoPixelState& state) {
  if (!state.is_product()) return projection_stats(state.space(), joint_distribution(state));
  const Moments m1 = excitation_stats(state.pixel(1));
  const Moments m2 = excitation_stats(state.pixel(2));
  ProjectionStats s;
  s.p1 = m1.mean;
  s.p2 = m2.mean;
  s.p_total = s.p1 + s.p2;
  s.p_d = s.p2 - s.p1;
  s.dp1 = m1.stddev;
  s.dp2 = m2.stddev;
  const double sum_var = m1.stddev * m1.stddev + m2.stddev * m2.stddev;
  s.dp_total = std::sqrt(sum_var);
  s.dp_d = std::sqrt(sum_var);
  s.g = 0.0;
  return s;
}

}  // namespace squeezelab
