#include "squeezelab/brute_force.hpp"

#include "squeezelab/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace squeezelab {
namespace {

using Spinor = Eigen::Matrix2cd;

// exp(-i angle n.sigma/2) in the (down, up) basis.
Spinor single_spin_rotation(const Vec3& n, double angle) {
  const Complex i(0.0, 1.0);
  Spinor sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, i, -i, 0;
  sz << -1, 0, 0, 1;
  const Spinor generator = n.x() * sx + n.y() * sy + n.z() * sz;
  return std::cos(angle / 2) * Spinor::Identity() - i * std::sin(angle / 2) * generator;
}

struct ProductSpace {
  int n_atoms;
  int spins;
  std::size_t size;

  explicit ProductSpace(int n) : n_atoms(n), spins(2 * n), size(std::size_t{1} << (2 * n)) {}

  // Number of up spins in pixel k (0 or 1) of basis index b.
  int excitations(std::size_t b, int k) const {
    const std::size_t mask = ((std::size_t{1} << n_atoms) - 1) << (k * n_atoms);
    return std::popcount(b & mask);
  }
  double jz(std::size_t b, int k) const { return excitations(b, k) - 0.5 * n_atoms; }
};

void apply_single_spin(Eigen::VectorXcd& psi, const ProductSpace& ps, int spin, const Spinor& u) {
  const std::size_t bit = std::size_t{1} << spin;
  for (std::size_t b = 0; b < ps.size; ++b) {
    if (b & bit) continue;
    const Complex down = psi[static_cast<Eigen::Index>(b)];
    const Complex up = psi[static_cast<Eigen::Index>(b | bit)];
    psi[static_cast<Eigen::Index>(b)] = u(0, 0) * down + u(0, 1) * up;
    psi[static_cast<Eigen::Index>(b | bit)] = u(1, 0) * down + u(1, 1) * up;
  }
}

template <typename Phase>
void apply_diagonal(Eigen::VectorXcd& psi, const ProductSpace& ps, Phase phase) {
  for (std::size_t b = 0; b < ps.size; ++b) {
    psi[static_cast<Eigen::Index>(b)] *= std::polar(1.0, -phase(ps.jz(b, 0), ps.jz(b, 1)));
  }
}

}  // namespace

ProjectionStats brute_force_oracle(int n_atoms, const Pipeline& pipeline) {
  if (n_atoms < 1 || n_atoms > kMaxOracleAtoms) {
    throw InvalidArgument("brute-force oracle supports 1 <= N <= " +
                          std::to_string(kMaxOracleAtoms) + ", got " + std::to_string(n_atoms));
  }
  const ProductSpace ps(n_atoms);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ps.size));
  psi[0] = 1.0;

  for (const PipelineStep& step : pipeline) {
    if (const auto* r = std::get_if<CollectiveRotation>(&step)) {
      const Spinor u = single_spin_rotation(r->axis, r->angle);
      for (int s = 0; s < ps.spins; ++s) apply_single_spin(psi, ps, s, u);
    } else if (const auto* g = std::get_if<GlobalTwist>(&step)) {
      apply_diagonal(psi, ps, [a = g->alpha](double z1, double z2) { return a * (z1 + z2) * (z1 + z2); });
    } else if (const auto* l = std::get_if<LocalTwist>(&step)) {
      apply_diagonal(psi, ps, [a = l->alpha](double z1, double z2) { return a * (z1 * z1 + z2 * z2); });
    } else if (const auto* p = std::get_if<PixelPhases>(&step)) {
      apply_diagonal(psi, ps, [p](double z1, double z2) { return p->phase1 * z1 + p->phase2 * z2; });
    }
  }

  // Moments of the excitation counts straight from the product basis.
  double e1 = 0, e2 = 0;
  for (std::size_t b = 0; b < ps.size; ++b) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(b)]);
    e1 += w * ps.excitations(b, 0);
    e2 += w * ps.excitations(b, 1);
  }
  double v1 = 0, v2 = 0, cov = 0, vt = 0, vd = 0;
  for (std::size_t b = 0; b < ps.size; ++b) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(b)]);
    const double x1 = ps.excitations(b, 0) - e1;
    const double x2 = ps.excitations(b, 1) - e2;
    v1 += w * x1 * x1;
    v2 += w * x2 * x2;
    cov += w * x1 * x2;
    vt += w * (x1 + x2) * (x1 + x2);
    vd += w * (x2 - x1) * (x2 - x1);
  }
  ProjectionStats s;
  s.p1 = e1;
  s.p2 = e2;
  s.p_total = e1 + e2;
  s.p_d = e2 - e1;
  s.dp1 = std::sqrt(std::max(v1, 0.0));
  s.dp2 = std::sqrt(std::max(v2, 0.0));
  s.dp_total = std::sqrt(std::max(vt, 0.0));
  s.dp_d = std::sqrt(std::max(vd, 0.0));
  s.g = cov;
  return s;
}

}  // namespace squeezelab
