#pragma once

#include "bnls/harness/fit.hpp"

#include <string>
#include <vector>

namespace bnls {

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool loglog = false;
  int width = 640;
  int height = 420;
};

struct PlotSeries {
  std::string name;
  TimeSeries data;
};

// Minimal line plot. On log axes non-positive points are dropped.
[[nodiscard]] std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_svg(const std::string& path, const std::vector<PlotSeries>& series, const PlotOptions& options);
// gnuplot-readable columns: "# t name1 name2 ...", series sampled on the first one's t.
void write_dat(const std::string& path, const std::vector<PlotSeries>& series);

} // namespace bnls
