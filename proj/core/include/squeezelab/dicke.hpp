#pragma once

// Single-pixel collective spin algebra on the symmetric Dicke manifold
// |J = N/2, M>, M = -J, ..., +J. Index i of every vector corresponds to
// M = -J + i.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>

namespace squeezelab {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;

enum class Axis { x, y, z };

Vec3 unit_vector(Axis axis);

// Largest pixel size accepted by DickeSpace.
inline constexpr int kMaxPixelAtoms = 5000;

class DickeSpace {
 public:
  // Throws InvalidArgument for n_atoms < 1 and ResourceLimitError above
  // kMaxPixelAtoms.
  explicit DickeSpace(int n_atoms);

  int n_atoms() const noexcept { return n_atoms_; }
  double j() const noexcept { return 0.5 * n_atoms_; }
  int dim() const noexcept { return n_atoms_ + 1; }
  double m(int index) const noexcept { return (*m_values_)[index]; }
  const Eigen::VectorXd& m_values() const noexcept { return *m_values_; }

  // ladder()[i] = <M_{i+1}| J+ |M_i> = sqrt(J(J+1) - M_i(M_i+1)), length dim-1.
  const Eigen::VectorXd& ladder() const noexcept { return *ladder_; }

  friend bool operator==(const DickeSpace& a, const DickeSpace& b) noexcept {
    return a.n_atoms_ == b.n_atoms_;
  }

 private:
  int n_atoms_;
  std::shared_ptr<const Eigen::VectorXd> m_values_;
  std::shared_ptr<const Eigen::VectorXd> ladder_;
};

DickeSpace build_space(int n_atoms);

struct AngularMomentumOperator {
  Axis axis;
  Eigen::MatrixXcd matrix;
};

AngularMomentumOperator angular_momentum_matrix(const DickeSpace& space, Axis axis);

// Dense matrix of n.J for an arbitrary real 3-vector n.
Eigen::MatrixXcd spin_component_matrix(const DickeSpace& space, const Vec3& n);

// Computes (n.J) v in O(dim) using the tridiagonal structure.
Eigen::VectorXcd apply_spin_component(const DickeSpace& space, const Vec3& n,
                                      const Eigen::VectorXcd& v);

class PixelState {
 public:
  // Requires amplitudes.size() == space.dim() and unit norm within 1e-10.
  PixelState(DickeSpace space, Eigen::VectorXcd amplitudes);

  // Divides by the norm; throws InvalidArgument for a zero vector.
  static PixelState normalized(DickeSpace space, Eigen::VectorXcd amplitudes);

  // Wraps amplitudes produced by a unitary, re-imposing the norm only when it
  // has drifted by more than 1e-10.
  static PixelState after_unitary(DickeSpace space, Eigen::VectorXcd amplitudes);

  const DickeSpace& space() const noexcept { return space_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  DickeSpace space_;
  Eigen::VectorXcd amplitudes_;
};

PixelState ground_state(const DickeSpace& space);

// exp(-i angle n.J) |state>. n must be a unit vector within 1e-9.
PixelState rotate(const PixelState& state, const Vec3& axis_vector, double angle);
PixelState rotate(const PixelState& state, Axis axis, double angle);

// exp(-i alpha Jz^2) |state>.
PixelState oat_evolve(const PixelState& state, double alpha);

// exp(-i phase Jz) |state>, applied as diagonal phases.
PixelState z_phase(const PixelState& state, double phase);

PixelState css(const DickeSpace& space, double theta, const Vec3& axis_vector);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Mean and standard deviation of a Hermitian operator. Throws
// InvalidArgument when op is not Hermitian within 1e-10.
Moments observable_stats(const PixelState& state, const Eigen::MatrixXcd& op);
Moments observable_stats(const PixelState& state, const AngularMomentumOperator& op);

// Moments of n.J without forming a matrix.
Moments spin_component_stats(const PixelState& state, const Vec3& n);

// p(M) = |<J, M|state>|^2.
Eigen::VectorXd population_distribution(const PixelState& state);

// Moments of the excitation count P = Jz + N/2 from p(M).
Moments excitation_stats(const PixelState& state);

// SO(3) matrix R such that for U = exp(-i angle n.J) one has
// U^dagger (a.J) U = (R^T a).J, i.e. <J> -> R <J>.
Eigen::Matrix3d bloch_rotation(const Vec3& axis_vector, double angle);

// Dense exp(-i angle n.J), built from the tridiagonal eigendecomposition of
// the generator.
Eigen::MatrixXcd rotation_matrix(const DickeSpace& space, const Vec3& axis_vector,
                                 double angle);

// Thread-safe store of coordinate-axis rotation matrices keyed by
// (N, axis, angle quantized at 1e-12 rad). Oldest entries are evicted once
// the byte budget is exceeded.
class RotationCache {
 public:
  explicit RotationCache(std::size_t byte_budget = std::size_t{1} << 30);

  static RotationCache& global();
  static std::int64_t quantize(double angle);

  std::shared_ptr<const Eigen::MatrixXcd> get(const DickeSpace& space, Axis axis,
                                              double angle);
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<int, int, std::int64_t>;

  std::size_t byte_budget_;
  std::size_t bytes_ = 0;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Eigen::MatrixXcd>> entries_;
  std::deque<Key> insertion_order_;
};

}  // namespace squeezelab
