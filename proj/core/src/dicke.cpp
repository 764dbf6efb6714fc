#include "squeezelab/dicke.hpp"

#include "squeezelab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <mutex>
#include <string>

namespace squeezelab {
namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kNormDrift = 1e-10;
constexpr double kAngleQuantum = 1e-12;

// Jx = Q diag(m) Q^T with real orthogonal Q (Jx is real symmetric tridiagonal).
// Eigenvectors are shared between x and y since Jy = Rz(pi/2) Jx Rz(pi/2)^dagger.
class LadderEigenCache {
 public:
  static LadderEigenCache& global() {
    static LadderEigenCache cache;
    return cache;
  }

  std::shared_ptr<const Eigen::MatrixXd> get(const DickeSpace& space) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(space.n_atoms()); it != entries_.end()) return it->second;
    }
    auto vectors = std::make_shared<const Eigen::MatrixXd>(compute(space, 1.0, 0.0));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(space.n_atoms(), vectors);
    return it->second;
  }

  // Eigenvectors of rho Jx + nz Jz, ordered by ascending eigenvalue.
  static Eigen::MatrixXd compute(const DickeSpace& space, double rho, double nz) {
    const int dim = space.dim();
    if (dim == 1) return Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd diag = nz * space.m_values();
    Eigen::VectorXd sub = 0.5 * rho * space.ladder();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw SingularConfigurationError("tridiagonal eigensolver failed for N=" +
                                       std::to_string(space.n_atoms()));
    }
    // The spectrum of n.J for unit n is exactly {-J, ..., J}.
    const Eigen::VectorXd& eval = solver.eigenvalues();
    for (int i = 0; i < dim; ++i) {
      if (std::abs(eval[i] - space.m(i)) > 1e-7) {
        throw SingularConfigurationError("generator spectrum deviates from M values");
      }
    }
    return solver.eigenvectors();
  }

 private:
  std::shared_mutex mutex_;
  std::map<int, std::shared_ptr<const Eigen::MatrixXd>> entries_;
};

void require_unit(const Vec3& n) {
  if (!std::isfinite(n.norm()) || std::abs(n.norm() - 1.0) > kUnitTolerance) {
    throw InvalidArgument("rotation axis must be a unit vector");
  }
}

Eigen::VectorXcd z_phases(const DickeSpace& space, double phase) {
  Eigen::VectorXcd d(space.dim());
  for (int i = 0; i < space.dim(); ++i) d[i] = std::polar(1.0, -phase * space.m(i));
  return d;
}

// Decomposes n = (rho cos chi, rho sin chi, nz).
struct AxisSplit {
  double rho;
  double chi;
  double nz;
};

AxisSplit split_axis(const Vec3& n) {
  const double rho = std::hypot(n.x(), n.y());
  return {rho, rho > 0.0 ? std::atan2(n.y(), n.x()) : 0.0, n.z()};
}

Eigen::MatrixXcd build_rotation(const DickeSpace& space, const Vec3& n, double angle) {
  const AxisSplit ax = split_axis(n);
  const int dim = space.dim();
  if (ax.rho < 1e-15) {
    Eigen::VectorXcd d = z_phases(space, angle * (ax.nz >= 0 ? 1.0 : -1.0));
    return d.asDiagonal();
  }
  std::shared_ptr<const Eigen::MatrixXd> cached;
  Eigen::MatrixXd fresh;
  const Eigen::MatrixXd* q = nullptr;
  if (std::abs(ax.nz) < 1e-15) {
    cached = LadderEigenCache::global().get(space);
    q = cached.get();
  } else {
    fresh = LadderEigenCache::compute(space, ax.rho, ax.nz);
    q = &fresh;
  }
  // exp(-i angle H') = Q (cos - i sin)(angle m) Q^T, split into real products.
  Eigen::VectorXd c(dim), s(dim);
  for (int i = 0; i < dim; ++i) {
    c[i] = std::cos(angle * space.m(i));
    s[i] = std::sin(angle * space.m(i));
  }
  const Eigen::MatrixXd re = (*q) * c.asDiagonal() * q->transpose();
  const Eigen::MatrixXd im = -((*q) * s.asDiagonal() * q->transpose());
  Eigen::MatrixXcd u(dim, dim);
  u.real() = re;
  u.imag() = im;
  if (ax.chi != 0.0) {
    // n.J = Rz(chi) (rho Jx + nz Jz) Rz(chi)^dagger.
    const Eigen::VectorXcd d = z_phases(space, ax.chi);
    u = d.asDiagonal() * u * d.conjugate().asDiagonal();
  }
  return u;
}

}  // namespace

Vec3 unit_vector(Axis axis) {
  switch (axis) {
    case Axis::x: return Vec3::UnitX();
    case Axis::y: return Vec3::UnitY();
    case Axis::z: return Vec3::UnitZ();
  }
  return Vec3::UnitZ();
}

DickeSpace::DickeSpace(int n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
  if (n_atoms > kMaxPixelAtoms) {
    throw ResourceLimitError("n_atoms=" + std::to_string(n_atoms) +
                             " exceeds the supported maximum of " +
                             std::to_string(kMaxPixelAtoms));
  }
  const double j = 0.5 * n_atoms;
  Eigen::VectorXd m(n_atoms + 1);
  for (int i = 0; i <= n_atoms; ++i) m[i] = -j + i;
  Eigen::VectorXd ladder(n_atoms);
  for (int i = 0; i < n_atoms; ++i) ladder[i] = std::sqrt(j * (j + 1.0) - m[i] * (m[i] + 1.0));
  m_values_ = std::make_shared<const Eigen::VectorXd>(std::move(m));
  ladder_ = std::make_shared<const Eigen::VectorXd>(std::move(ladder));
}

DickeSpace build_space(int n_atoms) { return DickeSpace(n_atoms); }

Eigen::MatrixXcd spin_component_matrix(const DickeSpace& space, const Vec3& n) {
  const int dim = space.dim();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  // n.J = nz Jz + (nx - i ny)/2 J+ + (nx + i ny)/2 J-
  const Complex up(0.5 * n.x(), -0.5 * n.y());
  for (int i = 0; i < dim; ++i) op(i, i) = n.z() * space.m(i);
  for (int i = 0; i + 1 < dim; ++i) {
    op(i + 1, i) = up * space.ladder()[i];
    op(i, i + 1) = std::conj(up) * space.ladder()[i];
  }
  return op;
}

AngularMomentumOperator angular_momentum_matrix(const DickeSpace& space, Axis axis) {
  return {axis, spin_component_matrix(space, unit_vector(axis))};
}

Eigen::VectorXcd apply_spin_component(const DickeSpace& space, const Vec3& n,
                                      const Eigen::VectorXcd& v) {
  const int dim = space.dim();
  const Complex up(0.5 * n.x(), -0.5 * n.y());
  const Complex down = std::conj(up);
  const Eigen::VectorXd& l = space.ladder();
  Eigen::VectorXcd out(dim);
  for (int i = 0; i < dim; ++i) out[i] = n.z() * space.m(i) * v[i];
  for (int i = 0; i + 1 < dim; ++i) {
    out[i + 1] += up * l[i] * v[i];
    out[i] += down * l[i] * v[i + 1];
  }
  return out;
}

PixelState::PixelState(DickeSpace space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim()) {
    throw InvalidArgument("amplitude vector length " + std::to_string(amplitudes_.size()) +
                          " does not match Dicke dimension " + std::to_string(space_.dim()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kNormDrift) {
    throw InvalidArgument("pixel state is not normalized");
  }
}

PixelState PixelState::normalized(DickeSpace space, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero vector");
  amplitudes /= n;
  return PixelState(std::move(space), std::move(amplitudes));
}

PixelState PixelState::after_unitary(DickeSpace space, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > kNormDrift) amplitudes /= n;
  return PixelState(std::move(space), std::move(amplitudes));
}

PixelState ground_state(const DickeSpace& space) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(space.dim());
  a[0] = 1.0;
  return PixelState(space, std::move(a));
}

PixelState rotate(const PixelState& state, const Vec3& axis_vector, double angle) {
  require_unit(axis_vector);
  const DickeSpace& space = state.space();
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    if ((axis_vector - unit_vector(axis)).norm() < 1e-15) return rotate(state, axis, angle);
  }
  return PixelState::after_unitary(space,
                                   build_rotation(space, axis_vector, angle) * state.amplitudes());
}

PixelState rotate(const PixelState& state, Axis axis, double angle) {
  if (axis == Axis::z) return z_phase(state, angle);
  const auto u = RotationCache::global().get(state.space(), axis, angle);
  return PixelState::after_unitary(state.space(), (*u) * state.amplitudes());
}

PixelState oat_evolve(const PixelState& state, double alpha) {
  const DickeSpace& space = state.space();
  Eigen::VectorXcd a = state.amplitudes();
  for (int i = 0; i < space.dim(); ++i) a[i] *= std::polar(1.0, -alpha * space.m(i) * space.m(i));
  return PixelState::after_unitary(space, std::move(a));
}

PixelState z_phase(const PixelState& state, double phase) {
  Eigen::VectorXcd a = state.amplitudes().cwiseProduct(z_phases(state.space(), phase));
  return PixelState::after_unitary(state.space(), std::move(a));
}

PixelState css(const DickeSpace& space, double theta, const Vec3& axis_vector) {
  return rotate(ground_state(space), axis_vector, theta);
}

Moments observable_stats(const PixelState& state, const Eigen::MatrixXcd& op) {
  const int dim = state.space().dim();
  if (op.rows() != dim || op.cols() != dim) throw InvalidArgument("operator size mismatch");
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("operator is not Hermitian");
  }
  const Eigen::VectorXcd& psi = state.amplitudes();
  const Eigen::VectorXcd q = op * psi;
  const double mean = psi.dot(q).real();
  const double var = (q - mean * psi).squaredNorm();
  return {mean, std::sqrt(var)};
}

Moments observable_stats(const PixelState& state, const AngularMomentumOperator& op) {
  return observable_stats(state, op.matrix);
}

Moments spin_component_stats(const PixelState& state, const Vec3& n) {
  const Eigen::VectorXcd& psi = state.amplitudes();
  const Eigen::VectorXcd q = apply_spin_component(state.space(), n, psi);
  const double mean = psi.dot(q).real();
  return {mean, std::sqrt((q - mean * psi).squaredNorm())};
}

Eigen::VectorXd population_distribution(const PixelState& state) {
  return state.amplitudes().cwiseAbs2();
}

Moments excitation_stats(const PixelState& state) {
  const DickeSpace& space = state.space();
  const Eigen::VectorXd p = population_distribution(state);
  const Eigen::VectorXd count = space.m_values().array() + space.j();
  const double mean = p.dot(count);
  const double var = p.dot((count.array() - mean).square().matrix());
  return {mean, std::sqrt(var)};
}

Eigen::Matrix3d bloch_rotation(const Vec3& axis_vector, double angle) {
  require_unit(axis_vector);
  return Eigen::AngleAxisd(angle, axis_vector.normalized()).toRotationMatrix();
}

Eigen::MatrixXcd rotation_matrix(const DickeSpace& space, const Vec3& axis_vector,
                                 double angle) {
  require_unit(axis_vector);
  return build_rotation(space, axis_vector, angle);
}

RotationCache::RotationCache(std::size_t byte_budget) : byte_budget_(byte_budget) {}

RotationCache& RotationCache::global() {
  static RotationCache cache;
  return cache;
}

std::int64_t RotationCache::quantize(double angle) {
  return static_cast<std::int64_t>(std::llround(angle / kAngleQuantum));
}

std::shared_ptr<const Eigen::MatrixXcd> RotationCache::get(const DickeSpace& space, Axis axis,
                                                           double angle) {
  const Key key{space.n_atoms(), static_cast<int>(axis), quantize(angle)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  // Build outside the lock; a concurrent duplicate build is harmless.
  const double snapped = static_cast<double>(std::get<2>(key)) * kAngleQuantum;
  auto u = std::make_shared<const Eigen::MatrixXcd>(
      build_rotation(space, unit_vector(axis), snapped));
  const std::size_t bytes = sizeof(Complex) * static_cast<std::size_t>(u->size());

  std::unique_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  while (!insertion_order_.empty() && bytes_ + bytes > byte_budget_) {
    auto victim = entries_.find(insertion_order_.front());
    bytes_ -= sizeof(Complex) * static_cast<std::size_t>(victim->second->size());
    entries_.erase(victim);
    insertion_order_.pop_front();
  }
  entries_.emplace(key, u);
  insertion_order_.push_back(key);
  bytes_ += bytes;
  return u;
}

std::size_t RotationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void RotationCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
  insertion_order_.clear();
  bytes_ = 0;
}

}  // namespace squeezelab
