#pragma once

#include <string>
#include <vector>

namespace bnls {

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> v;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;  // log v ~ intercept + slope log t
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual_rms = 0.0;
  std::size_t samples = 0;
};

// Least squares of log v against log t over samples with t_lo <= t <= t_hi.
// Needs at least 8 samples, all with t > 0 and v > 0.
[[nodiscard]] FitResult fit_growth(const TimeSeries& series, double t_lo, double t_hi);

} // namespace bnls
