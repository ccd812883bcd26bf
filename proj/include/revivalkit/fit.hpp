#pragma once

#include <vector>

namespace revivalkit {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;  // residual relative to the fitted value

  double operator()(double x) const { return intercept + slope * x; }
};

// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least squares slope of log y against log x.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

}  // namespace revivalkit
