#include "commands.hpp"

#include "manifest.hpp"
#include "svg.hpp"

#include "squeezelab/allan.hpp"
#include "squeezelab/csv.hpp"
#include "squeezelab/errors.hpp"
#include "squeezelab/optimizer.hpp"
#include "squeezelab/ramsey.hpp"
#include "squeezelab/sampler.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace squeezelab::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json merged(json a, const json& b) {
  a.update(b);
  return a;
}

json ramsey_defaults() {
  const RamseyConfig c;
  return {{"n_atoms", c.n_atoms},   {"kind", "css"},       {"alpha", nullptr},
          {"beta", nullptr},        {"phi", c.phi},        {"delta_eff", c.delta_eff},
          {"t_free", c.t_free},     {"t_cycle", c.t_cycle}, {"contrast", c.contrast},
          {"omega0", c.omega0}};
}

json grid_defaults() {
  const AngleGrid g;
  return {{"n_alpha", g.n_alpha}, {"n_beta", g.n_beta}, {"refine", true}};
}

void ramsey_flags(CLI::App& app, FlagSink& f) {
  f.integer(app, "--n", "n_atoms", "atoms per pixel");
  f.text(app, "--kind", "kind", "state preparation", {"css", "sss1", "sss2"});
  f.angle(app, "--alpha", "alpha", "twisting strength (rad, or e.g. 1.016pi)");
  f.angle(app, "--beta", "beta", "rotation angle after twisting");
  f.angle(app, "--phi", "phi", "phase difference between the pulses");
  f.real(app, "--delta-eff", "delta_eff", "differential frequency shift (rad/s)");
  f.real(app, "--t-free", "t_free", "free evolution time (s)");
  f.real(app, "--t-cycle", "t_cycle", "cycle time (s)");
  f.real(app, "--contrast", "contrast", "fringe contrast in (0, 1]");
  f.real(app, "--omega0", "omega0", "clock transition angular frequency (rad/s)");
}

AngleGrid angle_grid(const Settings& s) {
  AngleGrid g{s.integer("n_alpha"), s.integer("n_beta")};
  g.validate();
  return g;
}

PreparationKind kind_of(const Settings& s) {
  try {
    return parse_preparation_kind(s.text("kind"));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

// Explicit (alpha, beta), or the optimizer's arg-min when both are null.
PreparationSpec preparation(const Settings& s, json& derived) {
  const PreparationKind kind = kind_of(s);
  if (kind == PreparationKind::css) return PreparationSpec::coherent();
  const auto alpha = s.optional_real("alpha");
  const auto beta = s.optional_real("beta");
  if (alpha.has_value() != beta.has_value()) throw UsageError("alpha and beta must be given together");
  if (alpha) return PreparationSpec::squeezed(kind, *alpha, *beta);
  const MinResult m = minimize_dpd(kind, s.integer("n_atoms"), angle_grid(s), s.boolean("refine"));
  derived["alpha"] = m.alpha_star;
  derived["beta"] = m.beta_star;
  derived["dp_d_min"] = m.value;
  return PreparationSpec::squeezed(kind, m.alpha_star, m.beta_star);
}

RamseyConfig ramsey_config(const Settings& s, json& derived) {
  RamseyConfig c;
  c.n_atoms = s.integer("n_atoms");
  if (c.n_atoms < 1) throw UsageError("n_atoms must be >= 1");
  c.phi = s.real("phi");
  c.delta_eff = s.real("delta_eff");
  c.t_free = s.real("t_free");
  c.t_cycle = s.real("t_cycle");
  c.contrast = s.real("contrast");
  c.omega0 = s.real("omega0");
  c.validate();
  c.preparation = preparation(s, derived);
  return c;
}

SamplerMethod sampler_method(const Settings& s) {
  const std::string m = s.text("method");
  if (m == "inverse_cdf") return SamplerMethod::inverse_cdf;
  if (m == "rejection") return SamplerMethod::rejection;
  throw UsageError("method must be one of {inverse_cdf, rejection}");
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  fs::path add(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }
  std::vector<std::string> names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string kind_label(PreparationKind k) {
  std::string s(to_string(k));
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double gain_db(double ratio) { return 10.0 * std::log10(1.0 / ratio); }

// ---------------------------------------------------------------- ellipse

CommandResult run_ellipse(const Settings& s, const fs::path& dir) {
  const int steps = s.integer("phi_steps");
  if (steps < 4) throw UsageError("phi_steps must be >= 4");
  const std::vector<double> deltas = s.reals("delta_grid");
  if (deltas.empty()) throw UsageError("delta_grid is empty");
  const std::size_t shots = s.count("mc_shots");
  CommandResult result;
  RamseyConfig config = ramsey_config(s, result.derived);

  std::vector<double> phis(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) phis[k] = 2.0 * kPi * k / steps;

  Outputs out(dir);
  CsvWriter curves(out.add("excitation_curves.csv"),
                   {"delta", "phi", "p1_frac", "p2_frac", "dp1_frac", "dp2_frac"});
  CsvWriter geometry(out.add("ellipse_geometry.csv"), {"delta", "a", "b", "e", "orientation"});
  CsvWriter fitted(out.add("ellipse_fit.csv"), {"delta", "a", "b", "e", "orientation"});
  std::optional<CsvWriter> mc;
  if (shots > 0) {
    mc.emplace(out.add("ellipse_mc.csv"),
               std::vector<std::string>{"delta", "phi", "shots", "p1_frac", "p2_frac", "p1_frac_std", "p2_frac_std"});
  }

  const TwoPixelState prepared = prepare(config.preparation, config.n_atoms);
  const double n = config.n_atoms;
  std::vector<svg::Series> plot;
  std::vector<svg::Series> symbols;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    const double delta = deltas[d];
    const EllipseGeometry g = ellipse_geometry(delta, config.contrast);
    geometry.row({delta, g.a, g.b, g.e, g.orientation});

    config.delta_eff = delta / config.t_free;
    const std::vector<ExcitationPoint> curve = excitation_curve(config, phis);
    std::vector<std::pair<double, double>> samples;
    svg::Series line{.label = "delta/pi = " + format_double(std::round(delta / kPi * 1e4) / 1e4)};
    for (const ExcitationPoint& p : curve) {
      curves.row({delta, p.phi, p.p1_frac, p.p2_frac, p.dp1_frac, p.dp2_frac});
      samples.emplace_back(p.p1_frac, p.p2_frac);
      line.x.push_back(p.p1_frac);
      line.y.push_back(p.p2_frac);
    }
    line.x.push_back(line.x.front());
    line.y.push_back(line.y.front());
    plot.push_back(std::move(line));

    if (steps >= 8) {
      const EllipseGeometry f = fit_ellipse(samples);
      fitted.row({delta, f.a, f.b, f.e, f.orientation});
    } else {
      fitted.row({delta, kNaN, kNaN, kNaN, kNaN});
    }

    if (mc) {
      svg::Series dots{.style = svg::Style::markers, .color = "#333333"};
      for (int k = 0; k < steps; ++k) {
        const TwoPixelState state = ramsey_readout(prepared, phis[k], delta);
        const SeededRng rng(s.seed(), d * static_cast<std::uint64_t>(steps) + k);
        const std::vector<ExcitationCounts> counts = sample_excitations(state, shots, rng);
        double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
        for (const ExcitationCounts& c : counts) {
          s1 += c.m1 / n;
          s2 += c.m2 / n;
          q1 += (c.m1 / n) * (c.m1 / n);
          q2 += (c.m2 / n) * (c.m2 / n);
        }
        const double t = static_cast<double>(shots);
        const double m1 = s1 / t, m2 = s2 / t;
        mc->row({delta, phis[k], static_cast<std::int64_t>(shots), m1, m2,
                 std::sqrt(std::max(q1 / t - m1 * m1, 0.0)), std::sqrt(std::max(q2 / t - m2 * m2, 0.0))});
        dots.x.push_back(m1);
        dots.y.push_back(m2);
      }
      symbols.push_back(std::move(dots));
    }
  }
  curves.close();
  geometry.close();
  fitted.close();
  if (mc) mc->close();

  plot.insert(plot.end(), symbols.begin(), symbols.end());
  svg::line_plot(out.add("ellipse.svg"),
                 {.title = "Excitation fractions, " + kind_label(config.preparation.kind) + " N=" +
                           std::to_string(config.n_atoms),
                  .x_label = "P1/N", .y_label = "P2/N", .equal_aspect = true},
                 plot);
  result.outputs = out.names();
  return result;
}

// ---------------------------------------------------------------- noise-map

CommandResult run_noise_map(const Settings& s, const fs::path& dir) {
  const PreparationKind kind = kind_of(s);
  if (kind == PreparationKind::css) throw UsageError("noise-map needs --kind sss1 or sss2");
  const int n = s.integer("n_atoms");
  if (n < 1) throw UsageError("n_atoms must be >= 1");
  const AngleGrid grid = angle_grid(s);
  const double phi = s.real("phi");
  const NoiseMap map = scan_noise_map(kind, n, grid, phi);

  Outputs out(dir);
  CsvWriter csv(out.add("noise_map.csv"), {"alpha", "beta", "dp_total", "dp_pixel", "dp_d"});
  Eigen::Index bi = 0, bj = 0;
  for (int i = 0; i < grid.n_alpha; ++i) {
    for (int j = 0; j < grid.n_beta; ++j) {
      csv.row({grid.alpha(i), grid.beta(j), map.dp_total(i, j), map.dp_pixel(i, j), map.dp_d(i, j)});
      if (map.dp_d(i, j) < map.dp_d(bi, bj) - 1e-12) {
        bi = i;
        bj = j;
      }
    }
  }
  csv.close();

  CommandResult result;
  const double css = std::sqrt(0.5 * n);
  const double best = map.dp_d(bi, bj);
  result.derived = {{"grid_alpha_star", grid.alpha(static_cast<int>(bi))},
                    {"grid_beta_star", grid.beta(static_cast<int>(bj))},
                    {"grid_dp_d_min", best},
                    {"ratio_to_css", best / css},
                    {"gain_db", gain_db(best / css)}};

  const std::string tag = kind_label(kind) + " N=" + std::to_string(n);
  const std::map<std::string, const Eigen::MatrixXd*> panels = {
      {"dp_total", &map.dp_total}, {"dp_pixel", &map.dp_pixel}, {"dp_d", &map.dp_d}};
  const std::map<std::string, std::string> names = {
      {"dp_total", "dP"}, {"dp_pixel", "dP1"}, {"dp_d", "dP_d"}};
  for (const auto& [key, matrix] : panels) {
    svg::heatmap(out.add("noise_map_" + key + ".svg"),
                 {.title = names.at(key) + ", " + tag, .x_label = "beta/pi", .y_label = "alpha/pi"},
                 {*matrix, 0.0, 2.0, 0.0, 2.0, names.at(key)});
  }
  result.outputs = out.names();
  return result;
}

// ---------------------------------------------------------------- sweep-n

CommandResult run_sweep_n(const Settings& s, const fs::path& dir) {
  const PreparationKind kind = kind_of(s);
  if (kind == PreparationKind::css) throw UsageError("sweep-n needs --kind sss1 or sss2");
  const std::vector<int> n_list = s.integers("n_list");
  for (int n : n_list) {
    if (n < 1) throw UsageError("n_list entries must be >= 1");
  }
  const std::vector<SweepRow> rows = sweep_n(kind, n_list, angle_grid(s), s.boolean("refine"));

  Outputs out(dir);
  CsvWriter csv(out.add("sweep.csv"), {"n_atoms", "alpha_star", "beta_star", "dp_d_min", "dp_d_css",
                                       "ratio_to_css", "gain_db", "time_reduction"});
  svg::Series ratio{.label = kind_label(kind), .style = svg::Style::line_markers};
  for (const SweepRow& r : rows) {
    csv.row({static_cast<std::int64_t>(r.n_atoms), r.min.alpha_star, r.min.beta_star, r.min.value,
             std::sqrt(0.5 * r.n_atoms), r.min.ratio_to_css, r.min.gain_db, r.min.time_reduction});
    ratio.x.push_back(r.n_atoms);
    ratio.y.push_back(r.min.ratio_to_css);
  }
  csv.close();
  svg::line_plot(out.add("sweep.svg"),
                 {.title = "Minimum dP_d relative to CSS, " + kind_label(kind), .x_label = "N",
                  .y_label = "dP_d / sqrt(N/2)", .log_x = true},
                 {ratio});
  return {out.names(), json::object()};
}

// ---------------------------------------------------------------- distribution

CommandResult run_distribution(const Settings& s, const fs::path& dir) {
  CommandResult result;
  const RamseyConfig config = ramsey_config(s, result.derived);
  const RamseyResult r = run_ramsey(config);
  const Eigen::MatrixXd p = joint_distribution(r.state);
  const DickeSpace& space = r.state.space();
  const int dim = space.dim();

  Outputs out(dir);
  CsvWriter csv(out.add("distribution.csv"), {"M1", "M2", "p"});
  std::vector<double> pd(static_cast<std::size_t>(2 * dim - 1), 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      csv.row({space.m(i), space.m(j), p(i, j)});
      pd[static_cast<std::size_t>(j - i + dim - 1)] += p(i, j);
    }
  }
  csv.close();
  CsvWriter pd_csv(out.add("distribution_pd.csv"), {"p_d", "p"});
  std::vector<double> centers;
  for (int k = 0; k < 2 * dim - 1; ++k) {
    pd_csv.row({static_cast<std::int64_t>(k - (dim - 1)), pd[static_cast<std::size_t>(k)]});
    centers.push_back(k - (dim - 1));
  }
  pd_csv.close();
  result.derived["dp_d"] = r.stats.dp_d;

  const std::string tag = kind_label(config.preparation.kind) + " N=" + std::to_string(config.n_atoms);
  const double j = space.j();
  svg::heatmap(out.add("distribution.svg"),
               {.title = "p(M1, M2), " + tag, .x_label = "M2", .y_label = "M1"},
               {p, -j - 0.5, j + 0.5, -j - 0.5, j + 0.5, "p"});
  svg::bar_plot(out.add("distribution_pd.svg"),
                {.title = "p(P_d), " + tag, .x_label = "P_d = P2 - P1", .y_label = "probability"},
                centers, pd, 1.0);
  result.outputs = out.names();
  return result;
}

// ---------------------------------------------------------------- montecarlo

CommandResult run_montecarlo(const Settings& s, const fs::path& dir) {
  CommandResult result;
  const RamseyConfig config = ramsey_config(s, result.derived);
  const std::size_t trials = s.count("trials");
  if (trials < 1) throw UsageError("trials must be >= 1");
  const std::vector<ShotSample> shots =
      monte_carlo_ramsey(config, trials, SeededRng(s.seed()), sampler_method(s));

  Outputs out(dir);
  CsvWriter csv(out.add("shots.csv"), {"shot", "m1", "m2", "p_d", "delta_est"});
  std::vector<double> pd;
  pd.reserve(shots.size());
  double sum = 0, sq = 0;
  for (std::size_t t = 0; t < shots.size(); ++t) {
    const ShotSample& x = shots[t];
    csv.row({static_cast<std::int64_t>(t), static_cast<std::int64_t>(x.m1), static_cast<std::int64_t>(x.m2),
             static_cast<std::int64_t>(x.p_d), x.delta_est});
    pd.push_back(x.p_d);
    sum += x.p_d;
    sq += static_cast<double>(x.p_d) * x.p_d;
  }
  csv.close();

  const std::vector<HistogramBin> bins = histogram(pd, 1.0);
  CsvWriter hist(out.add("histogram.csv"), {"p_d", "count"});
  std::vector<double> centers, counts;
  for (const HistogramBin& b : bins) {
    hist.row({b.center, static_cast<std::int64_t>(b.count)});
    centers.push_back(b.center);
    counts.push_back(static_cast<double>(b.count));
  }
  hist.close();

  const double t = static_cast<double>(trials);
  const double mean = sum / t;
  const double stddev = std::sqrt(std::max(sq / t - mean * mean, 0.0));
  const ProjectionStats exact = run_ramsey(config).stats;
  result.derived["p_d_mean"] = mean;
  result.derived["p_d_std"] = stddev;
  result.derived["p_d_exact"] = exact.p_d;
  result.derived["dp_d_exact"] = exact.dp_d;

  svg::Series gauss{.label = "Gaussian, exact dP_d", .color = "#d62728"};
  if (exact.dp_d > 0 && !centers.empty()) {
    const double lo = centers.front() - 2, hi = centers.back() + 2;
    for (int k = 0; k <= 200; ++k) {
      const double x = lo + (hi - lo) * k / 200.0;
      const double z = (x - exact.p_d) / exact.dp_d;
      gauss.x.push_back(x);
      gauss.y.push_back(t / (exact.dp_d * std::sqrt(2.0 * kPi)) * std::exp(-0.5 * z * z));
    }
  }
  svg::bar_plot(out.add("histogram.svg"),
                {.title = "Single-shot P_d, " + kind_label(config.preparation.kind) + " N=" +
                          std::to_string(config.n_atoms) + ", " + std::to_string(trials) + " shots",
                 .x_label = "P_d", .y_label = "count"},
                centers, counts, 1.0, {gauss});
  result.outputs = out.names();
  return result;
}

// ---------------------------------------------------------------- allan

CommandResult run_allan(const Settings& s, const fs::path& dir) {
  CommandResult result;
  const RamseyConfig config = ramsey_config(s, result.derived);
  const std::size_t cycles = s.count("cycles");
  if (cycles < 16) throw UsageError("cycles must be >= 16");
  const std::string est = s.text("estimator");
  if (est != "non_overlapping" && est != "overlapping") {
    throw UsageError("estimator must be one of {non_overlapping, overlapping}");
  }
  const std::string norm = s.text("normalization");
  if (norm != "half_mean_square" && norm != "mean_square") {
    throw UsageError("normalization must be one of {half_mean_square, mean_square}");
  }

  const FrequencySeries series = simulate_series(config, cycles, SeededRng(s.seed()));
  const std::vector<std::size_t> ladder = default_ladder(cycles);
  AllanCurve curve = allan_deviation(
      series, ladder, est == "overlapping" ? AllanEstimator::overlapping : AllanEstimator::non_overlapping,
      norm == "mean_square" ? AllanNormalization::mean_square : AllanNormalization::half_mean_square);
  const double fit = fit_white_noise(curve);
  curve.fit_coefficient = fit;

  Outputs out(dir);
  CsvWriter series_csv(out.add("series.csv"), {"cycle", "delta_est"});
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    series_csv.row({static_cast<std::int64_t>(k), series.values[k]});
  }
  series_csv.close();
  CsvWriter allan_csv(out.add("allan.csv"), {"tau_s", "sigma_y", "pairs"});
  for (const AllanPoint& p : curve.points) allan_csv.row({p.tau, p.sigma_y, static_cast<std::int64_t>(p.pairs)});
  allan_csv.close();

  const double dp_d = run_ramsey(config).stats.dp_d;
  const double analytic = analytic_allan(dp_d, config.n_atoms, config.t_free, config.t_cycle, config.omega0);
  const double css = analytic_allan(std::sqrt(0.5 * config.n_atoms), config.n_atoms, config.t_free,
                                    config.t_cycle, config.omega0);
  const json summary = {{"kind", to_string(config.preparation.kind)},
                        {"n_atoms", config.n_atoms},
                        {"cycles", cycles},
                        {"fitted_a", fit},
                        {"analytic_a", analytic},
                        {"css_analytic_a", css},
                        {"ratio_to_css", fit / css},
                        {"gain_db", gain_db(fit / css)},
                        {"analytic_ratio_to_css", analytic / css},
                        {"analytic_gain_db", gain_db(analytic / css)}};
  write_json(out.add("summary.json"), summary);
  result.derived["fitted_a"] = fit;
  result.derived["analytic_a"] = analytic;

  svg::Series points{.label = "simulated", .style = svg::Style::markers};
  svg::Series fit_line{.label = "fit A/sqrt(tau)", .color = "#2ca02c"};
  svg::Series analytic_line{.label = "analytic", .color = "#d62728"};
  for (const AllanPoint& p : curve.points) {
    points.x.push_back(p.tau);
    points.y.push_back(p.sigma_y);
    fit_line.x.push_back(p.tau);
    fit_line.y.push_back(fit / std::sqrt(p.tau));
    analytic_line.x.push_back(p.tau);
    analytic_line.y.push_back(analytic / std::sqrt(p.tau));
  }
  svg::line_plot(out.add("allan.svg"),
                 {.title = "Allan deviation, " + kind_label(config.preparation.kind) + " N=" +
                           std::to_string(config.n_atoms),
                  .x_label = "tau (s)", .y_label = "sigma_y", .log_x = true, .log_y = true},
                 {points, fit_line, analytic_line});
  result.outputs = out.names();
  return result;
}

// ---------------------------------------------------------------- phase

CommandResult run_phase(const Settings& s, const fs::path& dir) {
  const int n = s.integer("n_atoms");
  if (n < 1) throw UsageError("n_atoms must be >= 1");
  const double alpha = s.real("alpha");
  const AngleGrid grid = angle_grid(s);
  const bool refine = s.boolean("refine");
  std::vector<int> n_list = s.integers("n_list");
  for (int k : n_list) {
    if (k < 1) throw UsageError("n_list entries must be >= 1");
  }

  Outputs out(dir);
  std::vector<double> betas(static_cast<std::size_t>(grid.n_beta));
  for (int j = 0; j < grid.n_beta; ++j) betas[j] = grid.beta(j);
  const std::vector<double> curve = phase_sensitivity_curve(n, alpha, betas);
  const double sql = 1.0 / std::sqrt(static_cast<double>(n));
  CsvWriter csv(out.add("phase.csv"), {"beta", "delta_phi", "ratio_to_sql"});
  svg::Series line{.label = "alpha/pi = " + format_double(std::round(alpha / kPi * 1e6) / 1e6)};
  for (std::size_t j = 0; j < betas.size(); ++j) {
    csv.row({betas[j], curve[j], curve[j] / sql});
    line.x.push_back(betas[j] / kPi);
    line.y.push_back(curve[j] / sql);
  }
  csv.close();

  CommandResult result;
  const PhaseMinResult at_n = minimize_phase_sensitivity(n, grid, alpha, refine);
  result.derived = {{"fixed_alpha_beta_star", at_n.min.beta_star},
                    {"fixed_alpha_min", at_n.min.value},
                    {"fixed_alpha_ratio_to_sql", at_n.min.ratio_to_css}};

  CsvWriter vs(out.add("phase_vs_n.csv"),
               {"n_atoms", "fixed_alpha", "fixed_beta_star", "fixed_min", "fixed_ratio_to_sql",
                "free_alpha_star", "free_beta_star", "free_min", "free_ratio_to_sql", "free_ratio_to_hl"});
  svg::Series fixed{.label = "fixed alpha", .style = svg::Style::line_markers};
  svg::Series free{.label = "free alpha", .style = svg::Style::line_markers};
  svg::Series sql_line{.label = "1/sqrt(N)", .color = "#777777"};
  svg::Series hl_line{.label = "1/N", .color = "#000000"};
  for (int k : n_list) {
    const PhaseMinResult f = minimize_phase_sensitivity(k, grid, alpha, refine);
    const PhaseMinResult g = minimize_phase_sensitivity(k, grid, std::nullopt, refine);
    vs.row({static_cast<std::int64_t>(k), alpha, f.min.beta_star, f.min.value, f.min.ratio_to_css,
            g.min.alpha_star, g.min.beta_star, g.min.value, g.min.ratio_to_css, g.ratio_to_hl});
    fixed.x.push_back(k);
    fixed.y.push_back(f.min.value);
    free.x.push_back(k);
    free.y.push_back(g.min.value);
    sql_line.x.push_back(k);
    sql_line.y.push_back(1.0 / std::sqrt(static_cast<double>(k)));
    hl_line.x.push_back(k);
    hl_line.y.push_back(1.0 / k);
  }
  vs.close();

  svg::line_plot(out.add("phase.svg"),
                 {.title = "Phase sensitivity, N=" + std::to_string(n), .x_label = "beta/pi",
                  .y_label = "dphi * sqrt(N)", .log_y = true},
                 {line});
  if (!n_list.empty()) {
    svg::line_plot(out.add("phase_vs_n.svg"),
                   {.title = "Minimum phase sensitivity", .x_label = "N", .y_label = "dphi",
                    .log_x = true, .log_y = true},
                   {fixed, free, sql_line, hl_line});
  }
  result.outputs = out.names();
  return result;
}

}  // namespace

// ---------------------------------------------------------------- flags

CLI::Option* FlagSink::real(CLI::App& app, const std::string& flag, const std::string& key,
                            const std::string& help) {
  return app.add_option_function<double>(flag, [this, key](const double& v) { values_[key] = v; }, help);
}

CLI::Option* FlagSink::integer(CLI::App& app, const std::string& flag, const std::string& key,
                               const std::string& help) {
  return app.add_option_function<int>(flag, [this, key](const int& v) { values_[key] = v; }, help);
}

CLI::Option* FlagSink::count(CLI::App& app, const std::string& flag, const std::string& key,
                             const std::string& help) {
  return app.add_option_function<std::uint64_t>(
      flag, [this, key](const std::uint64_t& v) { values_[key] = v; }, help);
}

CLI::Option* FlagSink::text(CLI::App& app, const std::string& flag, const std::string& key,
                            const std::string& help, const std::vector<std::string>& choices) {
  CLI::Option* opt =
      app.add_option_function<std::string>(flag, [this, key](const std::string& v) { values_[key] = v; }, help);
  if (!choices.empty()) opt->check(CLI::IsMember(choices, CLI::ignore_case));
  return opt;
}

CLI::Option* FlagSink::angle(CLI::App& app, const std::string& flag, const std::string& key,
                             const std::string& help) {
  return app.add_option_function<std::string>(
      flag,
      [this, key, flag](const std::string& v) {
        try {
          values_[key] = parse_angle(v);
        } catch (const UsageError& e) {
          throw CLI::ValidationError(flag, e.what());
        }
      },
      help);
}

CLI::Option* FlagSink::angles(CLI::App& app, const std::string& flag, const std::string& key,
                              const std::string& help) {
  return app
      .add_option_function<std::vector<std::string>>(
          flag,
          [this, key, flag](const std::vector<std::string>& v) {
            json list = json::array();
            try {
              for (const std::string& x : v) list.push_back(parse_angle(x));
            } catch (const UsageError& e) {
              throw CLI::ValidationError(flag, e.what());
            }
            values_[key] = list;
          },
          help)
      ->delimiter(',');
}

CLI::Option* FlagSink::integers(CLI::App& app, const std::string& flag, const std::string& key,
                                const std::string& help) {
  return app
      .add_option_function<std::vector<int>>(
          flag, [this, key](const std::vector<int>& v) { values_[key] = v; }, help)
      ->delimiter(',');
}

CLI::Option* FlagSink::toggle_off(CLI::App& app, const std::string& flag, const std::string& key,
                                  const std::string& help) {
  return app.add_flag_callback(flag, [this, key] { values_[key] = false; }, help);
}

void FlagSink::grid(CLI::App& app) {
  app.add_option_function<int>(
      "--grid",
      [this](const int& v) {
        values_["n_alpha"] = v;
        values_["n_beta"] = v;
      },
      "grid points per angle (alpha and beta)");
  integer(app, "--n-alpha", "n_alpha", "alpha grid points");
  integer(app, "--n-beta", "n_beta", "beta grid points");
  toggle_off(app, "--no-refine", "refine", "report the grid minimum without refinement");
}

std::vector<Command> make_commands() {
  const double q = kPi / 16;
  std::vector<Command> commands;

  commands.push_back(
      {"ellipse", "Excitation-fraction ellipses, geometry table and optional Monte Carlo overlay",
       merged(merged(ramsey_defaults(), grid_defaults()),
              {{"delta_grid", {0.0, q, 2 * q, 3 * q, 4 * q, 5 * q, 6 * q, 7 * q, 8 * q}},
               {"phi_steps", 64},
               {"mc_shots", 100},
               {"seed", 1}}),
       [](CLI::App& app, FlagSink& f) {
         ramsey_flags(app, f);
         f.grid(app);
         f.angles(app, "--delta-grid", "delta_grid", "differential phases in [0, pi/2], comma separated");
         f.integer(app, "--phi-steps", "phi_steps", "phase samples per ellipse (>= 4)");
         f.count(app, "--mc-shots", "mc_shots", "Monte Carlo shots per phase sample (0 disables)");
         f.count(app, "--seed", "seed", "RNG seed");
       },
       run_ellipse});

  commands.push_back({"noise-map", "Projection noise dP, dP1, dP_d over the (alpha, beta) grid",
                      merged(merged(ramsey_defaults(), grid_defaults()), {{"kind", "sss1"}}),
                      [](CLI::App& app, FlagSink& f) {
                        ramsey_flags(app, f);
                        f.grid(app);
                      },
                      run_noise_map});

  commands.push_back({"sweep-n", "Minimum dP_d versus atom number",
                      merged(merged(ramsey_defaults(), grid_defaults()),
                             {{"kind", "sss2"}, {"n_list", {1, 2, 5, 10, 20, 50, 100}}}),
                      [](CLI::App& app, FlagSink& f) {
                        ramsey_flags(app, f);
                        f.grid(app);
                        f.integers(app, "--n-list", "n_list", "atom numbers, comma separated");
                      },
                      run_sweep_n});

  commands.push_back({"distribution", "Joint distribution p(M1, M2) after the second pulse",
                      merged(merged(ramsey_defaults(), grid_defaults()), {{"kind", "sss1"}}),
                      [](CLI::App& app, FlagSink& f) {
                        ramsey_flags(app, f);
                        f.grid(app);
                      },
                      run_distribution});

  commands.push_back({"montecarlo", "Single-shot Monte Carlo of the differential readout",
                      merged(merged(ramsey_defaults(), grid_defaults()),
                             {{"kind", "sss2"}, {"trials", 10000}, {"method", "inverse_cdf"}, {"seed", 1}}),
                      [](CLI::App& app, FlagSink& f) {
                        ramsey_flags(app, f);
                        f.grid(app);
                        f.count(app, "--trials", "trials", "number of shots");
                        f.text(app, "--method", "method", "sampler", {"inverse_cdf", "rejection"});
                        f.count(app, "--seed", "seed", "RNG seed");
                      },
                      run_montecarlo});

  commands.push_back({"allan", "Simulated frequency series, Allan deviation and white-noise fit",
                      merged(merged(ramsey_defaults(), grid_defaults()),
                             {{"cycles", 100000},
                              {"estimator", "non_overlapping"},
                              {"normalization", "half_mean_square"},
                              {"seed", 1}}),
                      [](CLI::App& app, FlagSink& f) {
                        ramsey_flags(app, f);
                        f.grid(app);
                        f.count(app, "--cycles", "cycles", "number of Ramsey cycles");
                        f.text(app, "--estimator", "estimator", "Allan estimator",
                               {"non_overlapping", "overlapping"});
                        f.text(app, "--normalization", "normalization", "two-sample variance normalization",
                               {"half_mean_square", "mean_square"});
                        f.count(app, "--seed", "seed", "RNG seed");
                      },
                      run_allan});

  commands.push_back({"phase", "Single-ensemble phase sensitivity versus beta and its minimum versus N",
                      merged(grid_defaults(), {{"n_atoms", 100},
                                               {"alpha", 1.016 * kPi},
                                               {"n_list", {2, 5, 10, 20, 50, 100}}}),
                      [](CLI::App& app, FlagSink& f) {
                        f.integer(app, "--n", "n_atoms", "number of atoms");
                        f.angle(app, "--alpha", "alpha", "fixed twisting strength");
                        f.grid(app);
                        f.integers(app, "--n-list", "n_list", "atom numbers for the minimum vs N");
                      },
                      run_phase});
  return commands;
}

}  // namespace squeezelab::cli
