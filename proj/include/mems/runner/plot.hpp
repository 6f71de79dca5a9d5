#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mems/runner/record.hpp"

namespace mems::runner {

struct PlotLine {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // draw points instead of a polyline
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotLine> lines;
  std::vector<std::pair<double, std::string>> vertical_markers;
};

/// Standalone SVG document; output depends only on the plot contents.
std::string render_svg(const Plot& p);

/// Plots implied by a record's series (file stem -> plot). Empty series give
/// no plot.
std::vector<std::pair<std::string, Plot>> plan_plots(const ResultRecord& r);

/// Writes every planned plot as <dir>/<stem>.svg and returns the paths.
std::vector<std::filesystem::path> emit_plots(const ResultRecord& r, const std::filesystem::path& dir);

}  // namespace mems::runner
