#pragma once

#include <functional>
#include <vector>

namespace revivalkit {

// Chebyshev interpolant on [a, b] through first-kind nodes.
class Chebyshev {
 public:
  Chebyshev() = default;
  Chebyshev(const std::function<double(double)>& f, double a, double b, int degree);

  static Chebyshev from_node_values(const std::vector<double>& values, double a, double b);
  static std::vector<double> nodes(double a, double b, int count);

  double operator()(double x) const;
  Chebyshev derivative() const;

  double lower() const { return a_; }
  double upper() const { return b_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

 private:
  double a_ = -1.0;
  double b_ = 1.0;
  std::vector<double> coeffs_;
};

}  // namespace revivalkit
