#pragma once

// Minimal SVG emitters for report figures: line plots, heatmaps and a
// horizontal bar chart. No fonts beyond the viewer default, no scripts.

#include <filesystem>
#include <string>
#include <vector>

namespace brng::svg {

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  int width = 640;
  int height = 400;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

std::string line_plot(const std::vector<Series>& series, const Axes& axes);

/// values are row-major over (y, x); cells with valid[i] == 0 are drawn grey.
std::string heatmap(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& values, const std::vector<unsigned char>& valid,
                    const Axes& axes);

/// One bar per label on a log10 axis, with a vertical marker at `threshold`.
std::string log_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                     double threshold, const Axes& axes);

void write(const std::filesystem::path& path, const std::string& svg);

}  // namespace brng::svg
