#pragma once

// Two equal-N pixels on the joint space |M1, M2>. Amplitude matrix entry
// (i, j) is the amplitude of |M1 = m_values[i], M2 = m_values[j]>.

#include "squeezelab/dicke.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace squeezelab {

// Dense joint states are supported up to this pixel size.
inline constexpr int kMaxDenseJointAtoms = 300;

enum class PreparationKind { css, sss1, sss2 };

std::string_view to_string(PreparationKind kind);
// Accepts "css", "sss1", "sss2" (case-insensitive).
PreparationKind parse_preparation_kind(std::string_view text);

struct PreparationSpec {
  PreparationKind kind = PreparationKind::css;
  double theta = 1.5707963267948966;  // CSS rotation angle
  Vec3 axis = Vec3::UnitX();          // CSS rotation axis
  double alpha = 0.0;                 // twisting strength
  double beta = 1.5707963267948966;   // the y-rotation applied after twisting is (beta - pi/2)

  static PreparationSpec coherent(double theta = 1.5707963267948966,
                                  const Vec3& axis = Vec3::UnitX());
  static PreparationSpec squeezed(PreparationKind kind, double alpha, double beta);

  void validate() const;
};

class TwoPixelState {
 public:
  // Product state psi1 (x) psi2; the factors are kept so that separable
  // pipelines never need the dim x dim matrix.
  static TwoPixelState product(PixelState psi1, PixelState psi2);

  // Dense joint state; requires unit Frobenius norm within 1e-10.
  static TwoPixelState dense(DickeSpace space, Eigen::MatrixXcd amplitudes);

  const DickeSpace& space() const noexcept { return space_; }
  bool is_product() const noexcept { return factors_.has_value(); }

  // Pixel factor k in {1, 2}; throws InvalidArgument for entangled states.
  const PixelState& pixel(int k) const;

  // Joint amplitudes. For product states the matrix is materialized on
  // first use; concurrent callers observe a single materialization.
  const Eigen::MatrixXcd& amplitudes() const;

  double norm() const;

 private:
  struct LazyJoint {
    std::once_flag once;
    Eigen::MatrixXcd value;
  };

  TwoPixelState(DickeSpace space, std::optional<std::array<PixelState, 2>> factors,
                std::shared_ptr<LazyJoint> joint);

  DickeSpace space_;
  std::optional<std::array<PixelState, 2>> factors_;
  std::shared_ptr<LazyJoint> joint_;
};

// Same as TwoPixelState::product; throws InvalidArgument when N differs.
TwoPixelState tensor(const PixelState& psi1, const PixelState& psi2);

// exp(-i angle n.(J1 + J2)) = U (x) U, applied as U X U^T.
TwoPixelState collective_rotate(const TwoPixelState& state, const Vec3& axis_vector, double angle);

// exp(-i alpha (Jz1 + Jz2)^2). Always returns a dense state.
TwoPixelState global_oat(const TwoPixelState& state, double alpha);

// exp(-i alpha (Jz1^2 + Jz2^2)).
TwoPixelState local_oat(const TwoPixelState& state, double alpha);

// exp(-i phase1 Jz1) (x) exp(-i phase2 Jz2).
TwoPixelState pixel_phases(const TwoPixelState& state, double phase1, double phase2);

// State before the second Ramsey pulse: CSS, or one of the two twisting
// preparations built on CSS(pi/2, e_x).
TwoPixelState prepare(const PreparationSpec& spec, int n_atoms);

// p(M1, M2) = |amplitude|^2.
Eigen::MatrixXd joint_distribution(const TwoPixelState& state);

struct ProjectionStats {
  double p_total = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p_d = 0.0;
  double dp_total = 0.0;
  double dp1 = 0.0;
  double dp2 = 0.0;
  double dp_d = 0.0;
  double g = 0.0;  // <P1 P2> - <P1><P2>
};

// Statistics of P_k = Jz,k + N/2, P = P1 + P2 and P_d = P2 - P1.
ProjectionStats projection_stats(const TwoPixelState& state);

// Same statistics from an explicit distribution over (M1, M2).
ProjectionStats projection_stats(const DickeSpace& space, const Eigen::MatrixXd& distribution);

// Pipelines of collective operations, shared by the Dicke-manifold
// evaluation and the product-space oracle.
struct CollectiveRotation {
  Vec3 axis;
  double angle;
};
struct GlobalTwist {
  double alpha;
};
struct LocalTwist {
  double alpha;
};
struct PixelPhases {
  double phase1;
  double phase2;
};
using PipelineStep = std::variant<CollectiveRotation, GlobalTwist, LocalTwist, PixelPhases>;
using Pipeline = std::vector<PipelineStep>;

// Steps taking ground (x) ground to prepare(spec).
Pipeline preparation_pipeline(const PreparationSpec& spec);

TwoPixelState apply_pipeline(const TwoPixelState& state, const Pipeline& pipeline);

}  // namespace squeezelab
