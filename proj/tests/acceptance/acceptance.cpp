// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include "squeezelab/allan.hpp"
#include "squeezelab/brute_force.hpp"
#include "squeezelab/optimizer.hpp"
#include "squeezelab/ramsey.hpp"
#include "squeezelab/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace squeezelab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.str().empty()) detail << "; ";
    detail << what << (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

double binomial_pmf(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
}

std::vector<double> phase_grid(int steps) {
  std::vector<double> phi(steps);
  for (int k = 0; k < steps; ++k) phi[k] = 2.0 * kPi * k / steps;
  return phi;
}

RamseyConfig squeezed_config(PreparationKind kind, int n, const MinResult& m) {
  RamseyConfig c;
  c.n_atoms = n;
  c.preparation = PreparationSpec::squeezed(kind, m.alpha_star, m.beta_star);
  return c;
}

std::vector<double> flat_distribution(const RamseyConfig& c) {
  const Eigen::MatrixXd p = joint_distribution(run_ramsey(c).state);
  std::vector<double> out(p.data(), p.data() + p.size());
  double total = 0.0;
  for (double x : out) total += x;
  for (double& x : out) x /= total;
  return out;
}

// Shared across criteria.
MinResult sss1_50;
MinResult sss2_50;
MinResult sss2_1000;
bool have_sss1 = false, have_sss2 = false, have_sss2_1000 = false;

void criterion1(Outcome& o) {
  double worst = 0.0;
  for (int n : {1, 2, 10, 50, 100}) {
    RamseyConfig c;
    c.n_atoms = n;
    const ProjectionStats s = run_ramsey(c).stats;
    worst = std::max({worst, std::abs(s.dp1 - std::sqrt(n) / 2), std::abs(s.dp2 - std::sqrt(n) / 2),
                      std::abs(s.dp_d - std::sqrt(n / 2.0)),
                      std::abs(sensitivity(s, n, c.t_free) - 1 / (std::sqrt(2.0 * n) * c.t_free))});
  }
  o.check(worst <= 1e-9, "max deviation " + fmt("%.2e", worst));
}

void criterion2(Outcome& o) {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const DickeSpace space(n);
    for (PreparationKind kind : {PreparationKind::css, PreparationKind::sss1, PreparationKind::sss2}) {
      for (int t = 0; t < 20; ++t) {
        const double alpha = angle(gen), beta = angle(gen), phi = angle(gen), delta = angle(gen);
        const PreparationSpec spec =
            kind == PreparationKind::css
                ? PreparationSpec::coherent(alpha, Vec3(std::cos(beta), std::sin(beta), 0.0))
                : PreparationSpec::squeezed(kind, alpha, beta);
        const Pipeline p = ramsey_pipeline(spec, phi, delta);
        const ProjectionStats a = projection_stats(apply_pipeline(tensor(ground_state(space), ground_state(space)), p));
        const ProjectionStats b = brute_force_oracle(n, p);
        worst = std::max({worst, std::abs(a.p_total - b.p_total), std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2),
                          std::abs(a.p_d - b.p_d), std::abs(a.dp_total - b.dp_total), std::abs(a.dp1 - b.dp1),
                          std::abs(a.dp2 - b.dp2), std::abs(a.dp_d - b.dp_d), std::abs(a.g - b.g)});
      }
    }
  }
  o.check(worst <= 1e-10, "180 pipelines, max deviation " + fmt("%.2e", worst));
}

EllipseGeometry fitted(double delta) {
  RamseyConfig c;
  c.n_atoms = 50;
  c.delta_eff = delta;
  std::vector<std::pair<double, double>> samples;
  for (const auto& p : excitation_curve(c, phase_grid(64))) samples.emplace_back(p.p1_frac, p.p2_frac);
  return fit_ellipse(samples);
}

void criterion3(Outcome& o) {
  o.check(std::abs(ellipse_geometry(kPi / 4).e - 1.0) <= 1e-9, "e(pi/4)=" + fmt("%.12f", ellipse_geometry(kPi / 4).e));
  double worst = 0.0;
  for (double d : {kPi / 16, kPi / 8, 3 * kPi / 16}) worst = std::max(worst, std::abs(fitted(d).e - std::tan(d)));
  o.check(worst <= 1e-6, "fit vs tan(delta) max " + fmt("%.2e", worst));
  const double before = fitted(kPi / 4 - 0.05).orientation;
  const double after = fitted(kPi / 4 + 0.05).orientation;
  o.check(before == kPi / 4 && after == -kPi / 4,
          "orientation " + fmt("%+.4f", before) + " -> " + fmt("%+.4f", after));
}

void criterion4(Outcome& o) {
  sss1_50 = minimize_dpd(PreparationKind::sss1, 50);
  have_sss1 = true;
  o.check(in_range(sss1_50.ratio_to_css, 0.65, 0.75), "ratio " + fmt("%.4f", sss1_50.ratio_to_css));
  o.check(in_range(sss1_50.gain_db, 1.2, 1.9), "gain " + fmt("%.3f", sss1_50.gain_db) + " dB");
}

void criterion5(Outcome& o) {
  const MinResult r1 = minimize_dpd(PreparationKind::sss2, 1);
  const MinResult r2 = minimize_dpd(PreparationKind::sss2, 2);
  sss2_50 = minimize_dpd(PreparationKind::sss2, 50);
  have_sss2 = true;
  sss2_1000 = minimize_dpd(PreparationKind::sss2, 1000, AngleGrid{512, 512});
  have_sss2_1000 = true;
  o.check(std::abs(r1.ratio_to_css - 1.0) <= 1e-9, "N=1 " + fmt("%.12f", r1.ratio_to_css));
  o.check(std::abs(r2.ratio_to_css) <= 1e-9, "N=2 " + fmt("%.2e", r2.ratio_to_css));
  o.check(in_range(sss2_50.ratio_to_css, 0.24, 0.28),
          "N=50 " + fmt("%.4f", sss2_50.ratio_to_css) + " (" + fmt("%.2f", sss2_50.gain_db) + " dB)");
  o.check(in_range(sss2_1000.ratio_to_css, 0.095, 0.11),
          "N=1000 on 512x512 grid " + fmt("%.4f", sss2_1000.ratio_to_css) + " (" + fmt("%.2f", sss2_1000.gain_db) +
              " dB, time x" + fmt("%.1f", sss2_1000.time_reduction) + ")");
}

void criterion6(Outcome& o) {
  if (!have_sss1) sss1_50 = minimize_dpd(PreparationKind::sss1, 50);
  const int n = 50;
  const RamseyResult r = run_ramsey(squeezed_config(PreparationKind::sss1, n, sss1_50));
  const Eigen::MatrixXd p = joint_distribution(r.state);
  const DickeSpace& space = r.state.space();
  std::vector<std::pair<double, int>> entries;
  for (int k = 0; k < p.size(); ++k) entries.emplace_back(p.data()[k], k);
  std::partial_sort(entries.begin(), entries.begin() + 2, entries.end(), std::greater<>());
  bool corners = true;
  std::string where;
  for (int t = 0; t < 2; ++t) {
    const double m1 = space.m(entries[t].second % space.dim());
    const double m2 = space.m(entries[t].second / space.dim());
    corners = corners && std::abs(m1) == n / 2.0 && std::abs(m2) == n / 2.0;
    where += "(" + fmt("%+.0f", m1) + "," + fmt("%+.0f", m2) + ")";
  }
  o.check(corners, "top two at " + where);
  double band = 0.0;
  for (int j = 0; j < space.dim(); ++j) {
    for (int i = 0; i < space.dim(); ++i) {
      if (std::abs(space.m(i) - space.m(j)) <= 5.0) band += p(i, j);
    }
  }
  o.check(band >= 0.8, "mass within |M1-M2|<=5: " + fmt("%.3f", band));

  RamseyConfig c;
  c.n_atoms = n;
  const Eigen::MatrixXd q = joint_distribution(run_ramsey(c).state);
  double worst = 0.0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) worst = std::max(worst, std::abs(q(i, j) - binomial_pmf(n, i) * binomial_pmf(n, j)));
  }
  o.check(worst <= 1e-10, "CSS vs binomial outer product " + fmt("%.2e", worst));
}

void criterion7(Outcome& o) {
  const int n = 100;
  const auto curve = single_ensemble_curve(n, phase_grid(720));
  std::size_t best = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k].dp > curve[best].dp + 1e-12) best = k;
  }
  const double peak = curve[best].dp / std::sqrt(n);
  o.check(std::abs(peak - 0.5) <= 1e-9, "max dP/sqrt(N) " + fmt("%.12f", peak));
  o.check(std::abs(curve[best].phi - kPi / 2) <= 1e-12, "at phi=" + fmt("%.6f", curve[best].phi));
  o.check(std::abs(curve[best].p_frac - 0.5) <= 1e-9, "P/N there " + fmt("%.12f", curve[best].p_frac));
}

void criterion8(Outcome& o) {
  const PhaseMinResult fixed = minimize_phase_sensitivity(100, AngleGrid{}, 1.016 * kPi);
  o.check(in_range(fixed.min.ratio_to_css, 0.2375, 0.2625),
          "N=100 alpha=1.016pi min over beta " + fmt("%.4f", fixed.min.ratio_to_css) + " SQL");
  bool bounded = true;
  std::string ratios;
  for (int n : {2, 10, 50, 100}) {
    const PhaseMinResult r = minimize_phase_sensitivity(n);
    bounded = bounded && r.min.value >= (1.0 - 1e-9) / n;
    ratios += " N=" + std::to_string(n) + ":" + fmt("%.3f", r.ratio_to_hl);
  }
  o.check(bounded, "min/HL (rel. tol 1e-9)" + ratios);
}

void criterion9(Outcome& o) {
  if (!have_sss1) sss1_50 = minimize_dpd(PreparationKind::sss1, 50);
  if (!have_sss2) sss2_50 = minimize_dpd(PreparationKind::sss2, 50);
  RamseyConfig css_config;
  css_config.n_atoms = 50;
  const std::vector<std::pair<std::string, RamseyConfig>> cases{
      {"CSS", css_config},
      {"SSS1", squeezed_config(PreparationKind::sss1, 50, sss1_50)},
      {"SSS2", squeezed_config(PreparationKind::sss2, 50, sss2_50)}};
  std::uint64_t stream = 0;
  for (const auto& [name, config] : cases) {
    const std::vector<double> dist = flat_distribution(config);
    SeededRng a(kSeed, stream++), b(kSeed, stream++);
    const auto x = sample_rejection(dist, a, 100000);
    const auto y = sample_inverse_cdf(dist, b, 100000);
    const double pv = chi_squared_two_sample(x, y, dist.size());
    o.check(pv > 0.01, name + " p=" + fmt("%.3f", pv));
  }
  const std::vector<double> dist = flat_distribution(cases[1].second);
  SeededRng r1(kSeed, 100), r2(kSeed, 100);
  const bool same_direct = sample_rejection(dist, r1, 5000) == sample_rejection(dist, r2, 5000);
  const auto m1 = monte_carlo_ramsey(cases[1].second, 20000, SeededRng(kSeed, 101));
  const auto m2 = monte_carlo_ramsey(cases[1].second, 20000, SeededRng(kSeed, 101));
  bool same_mc = m1.size() == m2.size();
  for (std::size_t k = 0; same_mc && k < m1.size(); ++k) {
    same_mc = m1[k].m1 == m2[k].m1 && m1[k].m2 == m2[k].m2 && m1[k].delta_est == m2[k].delta_est;
  }
  o.check(same_direct && same_mc, "seeded replay identical");
}

void criterion10(Outcome& o) {
  if (!have_sss1) sss1_50 = minimize_dpd(PreparationKind::sss1, 50);
  if (!have_sss2) sss2_50 = minimize_dpd(PreparationKind::sss2, 50);
  if (!have_sss2_1000) sss2_1000 = minimize_dpd(PreparationKind::sss2, 1000, AngleGrid{512, 512});
  RamseyConfig css_config;
  css_config.n_atoms = 50;
  struct Case {
    std::string name;
    RamseyConfig config;
    double target, tolerance;
  };
  const std::vector<Case> cases{{"CSS", css_config, 3.0e-17, 0.10},
                                {"SSS1", squeezed_config(PreparationKind::sss1, 50, sss1_50), 2.2e-17, 0.10},
                                {"SSS2", squeezed_config(PreparationKind::sss2, 50, sss2_50), 7.5e-18, 0.12}};
  std::uint64_t stream = 200;
  for (const Case& c : cases) {
    const FrequencySeries series = simulate_series(c.config, 100000, SeededRng(kSeed, stream++));
    const double a = fit_white_noise(allan_deviation(series, default_ladder(series.values.size())));
    o.check(std::abs(a / c.target - 1.0) <= c.tolerance,
            c.name + " A=" + fmt("%.3e", a) + " (target " + fmt("%.2e", c.target) + " +/-" +
                fmt("%.0f", 100 * c.tolerance) + "%)");
  }
  const double analytic = analytic_allan(sss2_1000.value, 1000, 1.0, 1.0, kClockOmega0);
  o.check(std::abs(analytic / 7.0e-19 - 1.0) <= 0.05, "analytic SSS2 N=1000 " + fmt("%.3e", analytic));
}

void criterion11(Outcome& o) {
  const double z = redshift_fraction(10e-6);
  o.check(std::abs(z / 1.09e-21 - 1.0) <= 0.01, "redshift(10 um)=" + fmt("%.4e", z));
  const double hours = resolution_time(7.0e-19, 1.09e-21) / 3600.0;
  o.check(in_range(hours, 80.0, 130.0), "resolution time " + fmt("%.1f", hours) + " h");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"CSS baseline", criterion1},
      {"oracle equivalence", criterion2},
      {"ellipse geometry", criterion3},
      {"SSS1 minimum", criterion4},
      {"SSS2 minima", criterion5},
      {"joint distribution structure", criterion6},
      {"single-ensemble fringe", criterion7},
      {"phase sensitivity", criterion8},
      {"sampler equivalence", criterion9},
      {"Allan pipeline", criterion10},
      {"redshift utility", criterion11}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
