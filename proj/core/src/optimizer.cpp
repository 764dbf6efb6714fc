#include "squeezelab/optimizer.hpp"

#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace squeezelab {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kTieTolerance = 1e-12;
constexpr double kRefineTolerance = 1e-6;

void require_squeezed(PreparationKind kind) {
  if (kind == PreparationKind::css) throw InvalidArgument("noise scans need kind sss1 or sss2");
}

void require_capacity(PreparationKind kind, int n_atoms) {
  if (kind == PreparationKind::sss1 && n_atoms > kMaxDenseJointAtoms) {
    throw ResourceLimitError("SSS1 scans are limited to N <= " + std::to_string(kMaxDenseJointAtoms) +
                             " (got N=" + std::to_string(n_atoms) + ")");
  }
}

Eigen::VectorXcd phases(const DickeSpace& space, double angle) {
  Eigen::VectorXcd d(space.dim());
  for (int i = 0; i < space.dim(); ++i) d[i] = std::polar(1.0, -angle * space.m(i));
  return d;
}

// Bounded 1-D minimization, never returning a point worse than x0.
template <typename F>
double line_minimize(F&& f, double x0, double lo, double hi) {
  const int bits = static_cast<int>(std::ceil(-std::log2(kRefineTolerance / std::max(1.0, std::abs(x0) + 1.0))));
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, bits);
  return fx < f(x0) ? x : x0;
}

struct Refined {
  double alpha, beta, value;
};

// Nested bounded search inside one grid cell: the inner search finds the
// best beta for a given alpha, the outer one minimizes that profile.
template <typename F>
Refined refine_cell(F&& f, double alpha0, double beta0, double h_alpha, double h_beta,
                    bool move_alpha) {
  auto best_beta = [&](double a) {
    return line_minimize([&](double y) { return f(a, y); }, beta0, beta0 - h_beta, beta0 + h_beta);
  };
  double a = alpha0;
  if (move_alpha) {
    a = line_minimize([&](double x) { return f(x, best_beta(x)); }, alpha0, alpha0 - h_alpha,
                      alpha0 + h_alpha);
  }
  const double b = best_beta(a);
  return {a, b, f(a, b)};
}

MinResult make_result(double alpha, double beta, double value, double grid_value, double reference) {
  MinResult r;
  r.alpha_star = alpha;
  r.beta_star = beta;
  r.value = value;
  r.grid_value = grid_value;
  r.ratio_to_css = value / reference;
  r.gain_db = 10.0 * std::log10(1.0 / r.ratio_to_css);
  r.time_reduction = 1.0 / (r.ratio_to_css * r.ratio_to_css);
  return r;
}

struct GridMin {
  int i = -1, j = -1;
  double value = std::numeric_limits<double>::infinity();
};

// Row-major scan with alpha-then-beta tie-breaking.
GridMin grid_argmin(const Eigen::MatrixXd& values) {
  GridMin m;
  for (int i = 0; i < values.rows(); ++i) {
    for (int j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (std::isfinite(v) && v < m.value - kTieTolerance) m = {i, j, v};
    }
  }
  return m;
}

class PhaseEvaluator {
 public:
  explicit PhaseEvaluator(int n_atoms)
      : space_(n_atoms),
        css_(css(space_, kHalfPi, Vec3::UnitX()).amplitudes()),
        unrotate_(RotationCache::global().get(space_, Axis::x, -kHalfPi)) {}

  void set_alpha(double alpha) {
    if (alpha_ && *alpha_ == alpha) return;
    Eigen::VectorXcd twisted = css_;
    for (int i = 0; i < space_.dim(); ++i) twisted[i] *= std::polar(1.0, -alpha * space_.m(i) * space_.m(i));
    u_ = (*unrotate_) * twisted;
    jz_ = (u_.cwiseAbs2().array() * space_.m_values().array()).sum();
    alpha_ = alpha;
  }

  double at_beta(double beta) const {
    if (std::abs(jz_) < 1e-12) {
      throw SingularConfigurationError("phase sensitivity undefined: |<Jz>| < 1e-12");
    }
    const Eigen::VectorXcd v = phases(space_, kHalfPi - beta).cwiseProduct(u_);
    const Eigen::VectorXcd q = apply_spin_component(space_, Vec3::UnitX(), v);
    const double mean = v.dot(q).real();
    return std::sqrt((q - mean * v).squaredNorm()) / std::abs(jz_);
  }

  double safe_at_beta(double beta) const {
    return std::abs(jz_) < 1e-12 ? std::numeric_limits<double>::infinity() : at_beta(beta);
  }

 private:
  DickeSpace space_;
  Eigen::VectorXcd css_;
  std::shared_ptr<const Eigen::MatrixXcd> unrotate_;
  Eigen::VectorXcd u_;
  double jz_ = 0.0;
  std::optional<double> alpha_;
};

}  // namespace

void AngleGrid::validate() const {
  if (n_alpha < 2 || n_beta < 2) throw InvalidArgument("angle grid needs at least 2 points per axis");
}

NoiseEvaluator::NoiseEvaluator(PreparationKind kind, int n_atoms, double phi)
    : kind_(kind), space_(n_atoms) {
  require_squeezed(kind);
  require_capacity(kind, n_atoms);
  css_ = css(space_, kHalfPi, Vec3::UnitX()).amplitudes();
  unrotate_ = RotationCache::global().get(space_, Axis::x, -kHalfPi);

  const Vec3 x = Vec3::UnitX();
  const Eigen::Matrix3d r =
      bloch_rotation(x, kHalfPi) * bloch_rotation(Vec3::UnitZ(), phi) * bloch_rotation(x, kHalfPi);
  const Vec3 a = r.transpose() * Vec3::UnitZ();
  const Complex up(0.5 * a.x(), -0.5 * a.y());
  diag_ = a.z() * space_.m_values();
  up_ = up * space_.ladder().cast<Complex>();
  down_ = std::conj(up) * space_.ladder().cast<Complex>();
}

void NoiseEvaluator::set_alpha(double alpha) {
  if (alpha_ && *alpha_ == alpha) return;
  const int dim = space_.dim();
  if (kind_ == PreparationKind::sss2) {
    Eigen::VectorXcd twisted = css_;
    for (int i = 0; i < dim; ++i) twisted[i] *= std::polar(1.0, -alpha * space_.m(i) * space_.m(i));
    pixel_ = (*unrotate_) * twisted;
  } else {
    Eigen::MatrixXcd x(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < dim; ++i) {
        const double s = space_.m(i) + space_.m(j);
        x(i, j) = css_[i] * css_[j] * std::polar(1.0, -alpha * s * s);
      }
    }
    const Eigen::MatrixXcd half = (*unrotate_) * x;
    joint_.noalias() = half * unrotate_->transpose();
  }
  alpha_ = alpha;
}

NoisePoint NoiseEvaluator::at_beta(double beta) const {
  if (!alpha_) throw InvalidArgument("set_alpha must be called before at_beta");
  const int dim = space_.dim();
  const Eigen::VectorXcd d = phases(space_, kHalfPi - beta);
  NoisePoint p;
  if (kind_ == PreparationKind::sss2) {
    const Eigen::VectorXcd v = d.cwiseProduct(pixel_);
    Eigen::VectorXcd w = diag_.cwiseProduct(v);
    w.tail(dim - 1) += up_.cwiseProduct(v.head(dim - 1));
    w.head(dim - 1) += down_.cwiseProduct(v.tail(dim - 1));
    const double mean = v.dot(w).real();
    const double var = (w - mean * v).squaredNorm();
    p.dp_pixel = std::sqrt(var);
    p.dp_d = std::sqrt(2.0 * var);
    p.dp_total = p.dp_d;
    return p;
  }
  const Eigen::MatrixXcd v = d.asDiagonal() * joint_ * d.asDiagonal();
  Eigen::MatrixXcd w1 = diag_.asDiagonal() * v;
  w1.bottomRows(dim - 1) += up_.asDiagonal() * v.topRows(dim - 1);
  w1.topRows(dim - 1) += down_.asDiagonal() * v.bottomRows(dim - 1);
  Eigen::MatrixXcd w2 = v * diag_.asDiagonal();
  w2.rightCols(dim - 1) += v.leftCols(dim - 1) * up_.asDiagonal();
  w2.leftCols(dim - 1) += v.rightCols(dim - 1) * down_.asDiagonal();
  const Complex mean1 = v.conjugate().cwiseProduct(w1).sum();
  const Complex mean2 = v.conjugate().cwiseProduct(w2).sum();
  w1 -= mean1.real() * v;
  w2 -= mean2.real() * v;
  p.dp_pixel = w1.norm();
  p.dp_total = (w1 + w2).norm();
  p.dp_d = (w2 - w1).norm();
  return p;
}

NoisePoint NoiseEvaluator::operator()(double alpha, double beta) {
  set_alpha(alpha);
  return at_beta(beta);
}

NoiseMap scan_noise_map(PreparationKind kind, int n_atoms, const AngleGrid& grid, double phi) {
  require_squeezed(kind);
  require_capacity(kind, n_atoms);
  grid.validate();
  NoiseMap map;
  map.grid = grid;
  map.kind = kind;
  map.n_atoms = n_atoms;
  map.phi = phi;
  map.dp_total.resize(grid.n_alpha, grid.n_beta);
  map.dp_pixel.resize(grid.n_alpha, grid.n_beta);
  map.dp_d.resize(grid.n_alpha, grid.n_beta);
  parallel_for(static_cast<std::size_t>(grid.n_alpha), 0, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    NoiseEvaluator eval(kind, n_atoms, phi);
    eval.set_alpha(grid.alpha(i));
    for (int j = 0; j < grid.n_beta; ++j) {
      const NoisePoint p = eval.at_beta(grid.beta(j));
      map.dp_total(i, j) = p.dp_total;
      map.dp_pixel(i, j) = p.dp_pixel;
      map.dp_d(i, j) = p.dp_d;
    }
  });
  return map;
}

MinResult minimize_dpd(PreparationKind kind, int n_atoms, const AngleGrid& grid, bool refine) {
  const NoiseMap map = scan_noise_map(kind, n_atoms, grid);
  const GridMin m = grid_argmin(map.dp_d);
  const double reference = std::sqrt(0.5 * n_atoms);
  const double a0 = grid.alpha(m.i), b0 = grid.beta(m.j);
  if (!refine) return make_result(a0, b0, m.value, m.value, reference);
  NoiseEvaluator eval(kind, n_atoms);
  const Refined r = refine_cell([&](double a, double b) { return eval(a, b).dp_d; }, a0, b0,
                                grid.alpha_step(), grid.beta_step(), true);
  if (r.value < m.value) return make_result(r.alpha, r.beta, r.value, m.value, reference);
  return make_result(a0, b0, m.value, m.value, reference);
}

std::vector<SweepRow> sweep_n(PreparationKind kind, const std::vector<int>& n_list,
                              const AngleGrid& grid, bool refine) {
  if (n_list.empty()) throw InvalidArgument("atom-number list is empty");
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) rows.push_back({n, minimize_dpd(kind, n, grid, refine)});
  return rows;
}

double phase_sensitivity(int n_atoms, double alpha, double beta) {
  PhaseEvaluator eval(n_atoms);
  eval.set_alpha(alpha);
  return eval.at_beta(beta);
}

std::vector<double> phase_sensitivity_curve(int n_atoms, double alpha, const std::vector<double>& betas) {
  PhaseEvaluator eval(n_atoms);
  eval.set_alpha(alpha);
  std::vector<double> out;
  out.reserve(betas.size());
  for (double b : betas) {
    const double v = eval.safe_at_beta(b);
    out.push_back(std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

PhaseMinResult minimize_phase_sensitivity(int n_atoms, const AngleGrid& grid,
                                          std::optional<double> fixed_alpha, bool refine) {
  grid.validate();
  const int rows = fixed_alpha ? 1 : grid.n_alpha;
  auto alpha_of = [&](int i) { return fixed_alpha ? *fixed_alpha : grid.alpha(i); };
  Eigen::MatrixXd values(rows, grid.n_beta);
  parallel_for(static_cast<std::size_t>(rows), 0, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    PhaseEvaluator eval(n_atoms);
    eval.set_alpha(alpha_of(i));
    for (int j = 0; j < grid.n_beta; ++j) values(i, j) = eval.safe_at_beta(grid.beta(j));
  });
  const GridMin m = grid_argmin(values);
  if (m.i < 0) throw SingularConfigurationError("phase sensitivity is singular on the whole grid");
  const double sql = 1.0 / std::sqrt(static_cast<double>(n_atoms));
  const double a0 = alpha_of(m.i), b0 = grid.beta(m.j);
  MinResult result = make_result(a0, b0, m.value, m.value, sql);
  if (refine) {
    PhaseEvaluator eval(n_atoms);
    const Refined r = refine_cell(
        [&](double a, double b) {
          eval.set_alpha(a);
          return eval.safe_at_beta(b);
        },
        a0, b0, grid.alpha_step(), grid.beta_step(), !fixed_alpha);
    if (r.value < m.value) result = make_result(r.alpha, r.beta, r.value, m.value, sql);
  }
  return {result, result.value * n_atoms};
}

}  // namespace squeezelab
