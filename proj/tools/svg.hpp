#pragma once

// Minimal static SVG charts: line/marker plots, bar plots and heatmaps.

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace squeezelab::svg {

enum class Style { line, markers, line_markers };

struct Series {
  std::vector<double> x{};
  std::vector<double> y{};
  std::string label{};
  Style style = Style::line;
  std::string color{};  // palette colour when empty
};

struct Axes {
  std::string title{};
  std::string x_label{};
  std::string y_label{};
  bool log_x = false;
  bool log_y = false;
  bool equal_aspect = false;
};

// Non-finite points, and non-positive ones on log axes, are dropped.
void line_plot(const std::filesystem::path& path, const Axes& axes, const std::vector<Series>& series);

void bar_plot(const std::filesystem::path& path, const Axes& axes, const std::vector<double>& centers,
              const std::vector<double>& heights, double width,
              const std::vector<Series>& overlay = {});

// values(r, c) is drawn at y = y_min + (r + 1/2) dy, x = x_min + (c + 1/2) dx.
// Large matrices are block-averaged down to at most 160 cells per side.
struct Heatmap {
  Eigen::MatrixXd values;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::string colorbar_label;
};

void heatmap(const std::filesystem::path& path, const Axes& axes, const Heatmap& map);

}  // namespace squeezelab::svg
