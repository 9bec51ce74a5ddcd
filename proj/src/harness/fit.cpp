#include "bnls/harness/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace bnls {

FitResult fit_growth(const TimeSeries& series, double t_lo, double t_hi) {
  if (series.t.size() != series.v.size()) throw std::invalid_argument("fit_growth: t and v differ in length");
  if (!(t_lo < t_hi)) throw std::invalid_argument("fit_growth: need t_lo < t_hi");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const double t = series.t[i];
    if (t < t_lo || t > t_hi) continue;
    if (!(t > 0.0) || !(series.v[i] > 0.0))
      throw std::invalid_argument("fit_growth: values in the window must be positive");
    x.push_back(std::log(t));
    y.push_back(std::log(series.v[i]));
  }
  if (x.size() < 8)
    throw std::invalid_argument("fit_growth: " + std::to_string(x.size()) + " samples in the window, need at least 8");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_growth: all samples at the same time");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  r.samples = x.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    ss += e * e;
  }
  r.residual_rms = std::sqrt(ss / n);
  return r;
}

} // namespace bnls
