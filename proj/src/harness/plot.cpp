#include "bnls/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

} // namespace

std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& o) {
  auto tx = [&](double v) { return o.loglog ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!o.loglog || (x > 0.0 && y > 0.0));
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.data.t.size(); ++i) {
      if (!usable(s.data.t[i], s.data.v[i])) continue;
      x0 = std::min(x0, tx(s.data.t[i]));
      x1 = std::max(x1, tx(s.data.t[i]));
      y0 = std::min(y0, tx(s.data.v[i]));
      y1 = std::max(y1, tx(s.data.v[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double ml = 70, mr = 20, mt = 30, mb = 45;
  const double pw = o.width - ml - mr, ph = o.height - mt - mb;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (tx(v) - y0) / (y1 - y0) * ph; };
  auto untx = [&](double v) { return o.loglog ? std::pow(10.0, v) : v; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << o.width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << esc(o.title) << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double gx = ml + pw * i / 4.0, gy = mt + ph - ph * i / 4.0;
    s << "<text x=\"" << gx << "\" y=\"" << mt + ph + 15 << "\" text-anchor=\"middle\">" << num(untx(fx)) << "</text>\n";
    s << "<text x=\"" << ml - 5 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << num(untx(fy)) << "</text>\n";
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << o.height - 8 << "\" text-anchor=\"middle\">" << esc(o.x_label)
    << (o.loglog ? " (log)" : "") << "</text>\n";
  s << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << mt + ph / 2
    << ")\">" << esc(o.y_label) << (o.loglog ? " (log)" : "") << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& d = series[k].data;
    s << "<polyline fill=\"none\" stroke=\"" << palette[k % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < d.t.size(); ++i)
      if (usable(d.t[i], d.v[i])) s << num(px(d.t[i])) << "," << num(py(d.v[i])) << " ";
    s << "\"/>\n";
    s << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14 + 13 * k << "\" fill=\"" << palette[k % 6] << "\">"
      << esc(series[k].name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_svg(const std::string& path, const std::vector<PlotSeries>& series, const PlotOptions& options) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << svg_plot(series, options);
}

void write_dat(const std::string& path, const std::vector<PlotSeries>& series) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "# t";
  for (const auto& s : series) f << " " << s.name;
  f << "\n";
  if (series.empty()) return;
  char buf[40];
  for (std::size_t i = 0; i < series[0].data.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.16e", series[0].data.t[i]);
    f << buf;
    for (const auto& s : series) {
      std::snprintf(buf, sizeof buf, " %.16e", i < s.data.v.size() ? s.data.v[i] : std::nan(""));
      f << buf;
    }
    f << "\n";
  }
}

} // namespace bnls
