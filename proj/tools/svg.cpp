#include "svg.hpp"

#include "squeezelab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace squeezelab::svg {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  if (std::abs(v) < 1e-300) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return px_lo + t * (px_hi - px_lo);
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

// Data range with a small margin; degenerate ranges are widened.
std::pair<double, double> padded_range(double lo, double hi, bool log) {
  if (!(lo <= hi)) return log ? std::pair{1.0, 10.0} : std::pair{0.0, 1.0};
  if (log) {
    if (hi / lo < 1.0 + 1e-9) return {lo / 2.0, hi * 2.0};
    const double f = std::pow(hi / lo, 0.04);
    return {lo / f, hi * f};
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double w = std::max(std::abs(hi) * 0.1, 0.5);
    return {lo - w, hi + w};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<double> ticks(const Scale& s) {
  std::vector<double> out;
  if (s.log) {
    const int first = static_cast<int>(std::ceil(std::log10(s.lo) - 1e-9));
    const int last = static_cast<int>(std::floor(std::log10(s.hi) + 1e-9));
    if (last - first >= 1) {
      const int stride = std::max(1, (last - first + 1) / 8 + 1);
      for (int e = first; e <= last; e += stride) out.push_back(std::pow(10.0, e));
      return out;
    }
  }
  const double span = s.hi - s.lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double t = std::ceil(s.lo / step) * step; t <= s.hi + 1e-9 * span; t += step) {
    if (!s.log || t > 0.0) out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return out;
}

class Canvas {
 public:
  explicit Canvas(double right_margin) : right_(right_margin) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
         << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double plot_left() const { return kLeft; }
  double plot_right() const { return kWidth - right_; }
  double plot_top() const { return kTop; }
  double plot_bottom() const { return kHeight - kBottom; }

  std::ostringstream& raw() { return out_; }

  void frame(const Axes& axes, const Scale& sx, const Scale& sy) {
    out_ << "<rect x=\"" << num(plot_left()) << "\" y=\"" << num(plot_top()) << "\" width=\""
         << num(plot_right() - plot_left()) << "\" height=\"" << num(plot_bottom() - plot_top())
         << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(sx)) {
      const double x = sx.map(t);
      out_ << "<line x1=\"" << num(x) << "\" y1=\"" << num(plot_bottom()) << "\" x2=\"" << num(x)
           << "\" y2=\"" << num(plot_bottom() + 5) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(x) << "\" y=\"" << num(plot_bottom() + 18)
           << "\" text-anchor=\"middle\">" << label(t) << "</text>\n";
    }
    for (double t : ticks(sy)) {
      const double y = sy.map(t);
      out_ << "<line x1=\"" << num(plot_left() - 5) << "\" y1=\"" << num(y) << "\" x2=\""
           << num(plot_left()) << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(plot_left() - 8) << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\">" << label(t) << "</text>\n";
    }
    out_ << "<text x=\"" << num((plot_left() + plot_right()) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         << "font-size=\"15\">" << escape(axes.title) << "</text>\n"
         << "<text x=\"" << num((plot_left() + plot_right()) / 2) << "\" y=\"" << num(kHeight - 18)
         << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n"
         << "<text transform=\"translate(20 " << num((plot_top() + plot_bottom()) / 2)
         << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.y_label) << "</text>\n";
  }

  void save(const std::filesystem::path& path) {
    out_ << "</svg>\n";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << out_.str();
    file.flush();
    if (!file) throw IoError("failed writing " + path.string());
  }

 private:
  double right_;
  std::ostringstream out_;
};

void draw_series(Canvas& c, const Scale& sx, const Scale& sy, const std::vector<Series>& series,
                 bool log_x, bool log_y) {
  const double clip_x0 = c.plot_left(), clip_x1 = c.plot_right();
  c.raw() << "<clipPath id=\"plot\"><rect x=\"" << num(clip_x0) << "\" y=\"" << num(c.plot_top())
          << "\" width=\"" << num(clip_x1 - clip_x0) << "\" height=\""
          << num(c.plot_bottom() - c.plot_top()) << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const std::string color = s.color.empty() ? kPalette[k % kPalette.size()] : s.color;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style != Style::markers) {
      std::string path;
      bool pen_down = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!usable(s.x[i], log_x) || !usable(s.y[i], log_y)) {
          pen_down = false;
          continue;
        }
        path += (pen_down ? " L" : " M") + num(sx.map(s.x[i])) + ' ' + num(sy.map(s.y[i]));
        pen_down = true;
      }
      if (!path.empty()) {
        c.raw() << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.6\"/>\n";
      }
    }
    if (s.style != Style::line) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!usable(s.x[i], log_x) || !usable(s.y[i], log_y)) continue;
        c.raw() << "<circle cx=\"" << num(sx.map(s.x[i])) << "\" cy=\"" << num(sy.map(s.y[i]))
                << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
      }
    }
  }
  c.raw() << "</g>\n";

  const auto labelled = std::count_if(series.begin(), series.end(), [](const Series& s) { return !s.label.empty(); });
  if (labelled > 0) {
    c.raw() << "<rect x=\"" << num(c.plot_right() - 156) << "\" y=\"" << num(c.plot_top() + 4)
            << "\" width=\"150\" height=\"" << num(16.0 * labelled + 4)
            << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#999999\"/>\n";
  }
  double y = c.plot_top() + 16;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].label.empty()) continue;
    const std::string color = series[k].color.empty() ? kPalette[k % kPalette.size()] : series[k].color;
    const double x = c.plot_right() - 150;
    c.raw() << "<line x1=\"" << num(x) << "\" y1=\"" << num(y - 4) << "\" x2=\"" << num(x + 20)
            << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(x + 26) << "\" y=\"" << num(y) << "\">" << escape(series[k].label)
            << "</text>\n";
    y += 16;
  }
}

Scale make_scale(const std::vector<double>& values, bool log, double px_lo, double px_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!usable(v, log)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto [a, b] = padded_range(lo, hi, log);
  return {a, b, log, px_lo, px_hi};
}

std::vector<double> collect(const std::vector<Series>& series, bool x) {
  std::vector<double> out;
  for (const auto& s : series) out.insert(out.end(), (x ? s.x : s.y).begin(), (x ? s.x : s.y).end());
  return out;
}

std::string colormap(double t) {
  static constexpr std::array<std::array<double, 3>, 5> anchors = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  if (!std::isfinite(t)) return "#cccccc";
  t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), anchors.size() - 2);
  const double f = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0]))),
                static_cast<int>(std::lround(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1]))),
                static_cast<int>(std::lround(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2]))));
  return buf;
}

Eigen::MatrixXd downsample(const Eigen::MatrixXd& m, int limit) {
  const int fr = (static_cast<int>(m.rows()) + limit - 1) / limit;
  const int fc = (static_cast<int>(m.cols()) + limit - 1) / limit;
  if (fr <= 1 && fc <= 1) return m;
  const int rows = (static_cast<int>(m.rows()) + fr - 1) / fr;
  const int cols = (static_cast<int>(m.cols()) + fc - 1) / fc;
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      int n = 0;
      for (int i = r * fr; i < std::min<int>((r + 1) * fr, m.rows()); ++i) {
        for (int j = c * fc; j < std::min<int>((c + 1) * fc, m.cols()); ++j) {
          if (std::isfinite(m(i, j))) {
            sum += m(i, j);
            ++n;
          }
        }
      }
      out(r, c) = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace

void line_plot(const std::filesystem::path& path, const Axes& axes, const std::vector<Series>& series) {
  Canvas c(30.0);
  Scale sx = make_scale(collect(series, true), axes.log_x, c.plot_left(), c.plot_right());
  Scale sy = make_scale(collect(series, false), axes.log_y, c.plot_bottom(), c.plot_top());
  if (axes.equal_aspect && !axes.log_x && !axes.log_y) {
    const double lo = std::min(sx.lo, sy.lo), hi = std::max(sx.hi, sy.hi);
    sx.lo = sy.lo = lo;
    sx.hi = sy.hi = hi;
  }
  c.frame(axes, sx, sy);
  draw_series(c, sx, sy, series, axes.log_x, axes.log_y);
  c.save(path);
}

void bar_plot(const std::filesystem::path& path, const Axes& axes, const std::vector<double>& centers,
              const std::vector<double>& heights, double width, const std::vector<Series>& overlay) {
  Canvas c(30.0);
  std::vector<double> xs = collect(overlay, true);
  std::vector<double> ys = collect(overlay, false);
  for (double x : centers) {
    xs.push_back(x - width / 2);
    xs.push_back(x + width / 2);
  }
  ys.insert(ys.end(), heights.begin(), heights.end());
  ys.push_back(0.0);
  const Scale sx = make_scale(xs, false, c.plot_left(), c.plot_right());
  const Scale sy = make_scale(ys, false, c.plot_bottom(), c.plot_top());
  c.frame(axes, sx, sy);
  for (std::size_t i = 0; i < std::min(centers.size(), heights.size()); ++i) {
    if (!std::isfinite(heights[i])) continue;
    const double x0 = sx.map(centers[i] - width / 2), x1 = sx.map(centers[i] + width / 2);
    const double y0 = sy.map(0.0), y1 = sy.map(heights[i]);
    c.raw() << "<rect x=\"" << num(x0) << "\" y=\"" << num(std::min(y0, y1)) << "\" width=\""
            << num(std::max(x1 - x0, 0.5)) << "\" height=\"" << num(std::abs(y0 - y1))
            << "\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"/>\n";
  }
  draw_series(c, sx, sy, overlay, false, false);
  c.save(path);
}

void heatmap(const std::filesystem::path& path, const Axes& axes, const Heatmap& map) {
  Canvas c(110.0);
  const Scale sx{map.x_min, map.x_max, false, c.plot_left(), c.plot_right()};
  const Scale sy{map.y_min, map.y_max, false, c.plot_bottom(), c.plot_top()};
  const Eigen::MatrixXd v = downsample(map.values, 160);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v.data()[i])) continue;
    lo = std::min(lo, v.data()[i]);
    hi = std::max(hi, v.data()[i]);
  }
  if (!(lo < hi)) {
    lo = std::isfinite(lo) ? lo : 0.0;
    hi = lo + 1.0;
  }
  const double dx = (map.x_max - map.x_min) / v.cols();
  const double dy = (map.y_max - map.y_min) / v.rows();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index col = 0; col < v.cols(); ++col) {
      const double x0 = sx.map(map.x_min + col * dx), x1 = sx.map(map.x_min + (col + 1) * dx);
      const double y0 = sy.map(map.y_min + (r + 1) * dy), y1 = sy.map(map.y_min + r * dy);
      c.raw() << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.3)
              << "\" height=\"" << num(y1 - y0 + 0.3) << "\" fill=\"" << colormap((v(r, col) - lo) / (hi - lo))
              << "\"/>\n";
    }
  }
  c.frame(axes, sx, sy);

  const double bx = c.plot_right() + 20, bw = 18;
  const int steps = 64;
  const double h = (c.plot_bottom() - c.plot_top()) / steps;
  for (int k = 0; k < steps; ++k) {
    c.raw() << "<rect x=\"" << num(bx) << "\" y=\"" << num(c.plot_bottom() - (k + 1) * h) << "\" width=\""
            << num(bw) << "\" height=\"" << num(h + 0.3) << "\" fill=\"" << colormap((k + 0.5) / steps)
            << "\"/>\n";
  }
  const Scale sc{lo, hi, false, c.plot_bottom(), c.plot_top()};
  for (double t : ticks(sc)) {
    c.raw() << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(sc.map(t) + 4) << "\">" << label(t)
            << "</text>\n";
  }
  c.raw() << "<text transform=\"translate(" << num(kWidth - 12) << ' '
          << num((c.plot_top() + c.plot_bottom()) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
          << escape(map.colorbar_label) << "</text>\n";
  c.save(path);
}

}  // namespace squeezelab::svg
