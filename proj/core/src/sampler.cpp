#include "squeezelab/sampler.hpp"

#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace squeezelab {
namespace {

void check_distribution(std::span<const double> dist) {
  if (dist.empty()) throw InvalidArgument("distribution is empty");
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("distribution has a negative or non-finite entry");
    total += p;
  }
  if (total == 0.0) throw InvalidArgument("distribution is identically zero");
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("distribution does not sum to 1");
}

class InverseCdf {
 public:
  explicit InverseCdf(std::span<const double> dist) : cdf_(dist.size()) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      acc += dist[k];
      cdf_[k] = acc;
    }
    for (std::size_t k = dist.size(); k-- > 0;) {
      if (dist[k] > 0.0) {
        last_ = k;
        break;
      }
    }
  }

  std::size_t operator()(SeededRng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), last_);
  }

 private:
  std::vector<double> cdf_;
  std::size_t last_ = 0;
};

class Rejection {
 public:
  explicit Rejection(std::span<const double> dist)
      : dist_(dist), p_max_(*std::max_element(dist.begin(), dist.end())) {}

  std::size_t operator()(SeededRng& rng) const {
    for (;;) {
      const std::size_t k = rng.uniform_index(dist_.size());
      if (rng.uniform() < dist_[k] / p_max_) return k;
    }
  }

 private:
  std::span<const double> dist_;
  double p_max_;
};

template <typename Sampler>
std::vector<std::size_t> draw(const Sampler& sampler, SeededRng& rng, std::size_t count) {
  std::vector<std::size_t> out(count);
  for (auto& k : out) k = sampler(rng);
  return out;
}

// Draws (i, j) index pairs for one shot.
class ShotSource {
 public:
  ShotSource(const TwoPixelState& state, SamplerMethod method) : method_(method) {
    if (state.is_product()) {
      marginal1_ = to_vector(population_distribution(state.pixel(1)));
      marginal2_ = to_vector(population_distribution(state.pixel(2)));
    } else {
      const Eigen::MatrixXd p = joint_distribution(state);
      joint_.assign(p.data(), p.data() + p.size());
      dim_ = static_cast<std::size_t>(p.rows());
    }
    for (auto* v : {&marginal1_, &marginal2_, &joint_}) {
      if (v->empty()) continue;
      double total = 0.0;
      for (double x : *v) total += x;
      for (double& x : *v) x /= total;
    }
  }

  template <typename Fn>
  void with_samplers(Fn&& fn) const {
    if (method_ == SamplerMethod::inverse_cdf) {
      run<InverseCdf>(fn);
    } else {
      run<Rejection>(fn);
    }
  }

 private:
  template <typename Sampler, typename Fn>
  void run(Fn& fn) const {
    if (joint_.empty()) {
      const Sampler s1(marginal1_), s2(marginal2_);
      fn([&](SeededRng& rng) {
        const std::size_t i = s1(rng);
        return std::pair{i, s2(rng)};
      });
    } else {
      const Sampler s(joint_);
      fn([&](SeededRng& rng) {
        const std::size_t k = s(rng);
        return std::pair{k % dim_, k / dim_};
      });
    }
  }

  static std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
  }

  SamplerMethod method_;
  std::vector<double> marginal1_, marginal2_, joint_;
  std::size_t dim_ = 0;
};

}  // namespace

std::vector<std::size_t> sample_rejection(std::span<const double> dist, SeededRng& rng,
                                          std::size_t count) {
  check_distribution(dist);
  if (count < 1) throw InvalidArgument("count must be >= 1");
  return draw(Rejection(dist), rng, count);
}

std::vector<std::size_t> sample_inverse_cdf(std::span<const double> dist, SeededRng& rng,
                                            std::size_t count) {
  check_distribution(dist);
  if (count < 1) throw InvalidArgument("count must be >= 1");
  return draw(InverseCdf(dist), rng, count);
}

std::vector<ExcitationCounts> sample_excitations(const TwoPixelState& state, std::size_t trials,
                                                 const SeededRng& rng, SamplerMethod method) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const ShotSource source(state, method);
  std::vector<ExcitationCounts> out(trials);
  const std::size_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
  source.with_samplers([&](auto sample_pair) {
    parallel_for(chunks, 0, [&](std::size_t c) {
      SeededRng local = rng.substream(c);
      const std::size_t end = std::min(trials, (c + 1) * kMonteCarloChunk);
      for (std::size_t t = c * kMonteCarloChunk; t < end; ++t) {
        const auto [i, j] = sample_pair(local);
        out[t] = {static_cast<int>(i), static_cast<int>(j)};
      }
    });
  });
  return out;
}

std::vector<ShotSample> monte_carlo_ramsey(const RamseyConfig& config, std::size_t trials,
                                           const SeededRng& rng, SamplerMethod method) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const double sin_phi = std::sin(config.phi);
  if (std::abs(sin_phi) < 1e-6) {
    throw SingularConfigurationError("estimator undefined: |sin(phi)| < 1e-6");
  }
  const RamseyResult result = run_ramsey(config);
  const double scale = 1.0 / (config.n_atoms * config.t_free * sin_phi);
  const std::vector<ExcitationCounts> counts = sample_excitations(result.state, trials, rng, method);
  std::vector<ShotSample> shots(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    ShotSample& s = shots[t];
    s.m1 = counts[t].m1;
    s.m2 = counts[t].m2;
    s.p_d = s.m2 - s.m1;
    s.delta_est = s.p_d * scale;
  }
  return shots;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width) {
  if (!(bin_width > 0.0)) throw InvalidArgument("bin_width must be > 0");
  std::map<long long, std::size_t> counts;
  for (double x : samples) ++counts[std::llround(x / bin_width)];
  std::vector<HistogramBin> out;
  out.reserve(counts.size());
  for (const auto& [k, n] : counts) out.push_back({static_cast<double>(k) * bin_width, n});
  return out;
}

double chi_squared_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b,
                              std::size_t n_outcomes) {
  if (a.empty() || b.empty()) throw InvalidArgument("both samples must be non-empty");
  std::vector<double> ca(n_outcomes, 0.0), cb(n_outcomes, 0.0);
  for (std::size_t k : a) {
    if (k >= n_outcomes) throw InvalidArgument("outcome index out of range");
    ca[k] += 1.0;
  }
  for (std::size_t k : b) {
    if (k >= n_outcomes) throw InvalidArgument("outcome index out of range");
    cb[k] += 1.0;
  }
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> pooled{0.0, 0.0};
  for (std::size_t k = 0; k < n_outcomes; ++k) {
    if (ca[k] + cb[k] >= 10.0) {
      bins.emplace_back(ca[k], cb[k]);
    } else {
      pooled.first += ca[k];
      pooled.second += cb[k];
    }
  }
  if (pooled.first + pooled.second > 0.0) bins.push_back(pooled);
  if (bins.size() < 2) return 1.0;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ra = std::sqrt(nb / na), rb = std::sqrt(na / nb);
  double chi2 = 0.0;
  for (const auto& [x, y] : bins) {
    const double d = ra * x - rb * y;
    chi2 += d * d / (x + y);
  }
  const double dof = static_cast<double>(bins.size()) - (a.size() == b.size() ? 1.0 : 0.0);
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), chi2));
}

}  // namespace squeezelab
