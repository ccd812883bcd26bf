#include "revivalkit/chebyshev.hpp"

#include <cmath>

namespace revivalkit {

std::vector<double> Chebyshev::nodes(double a, double b, int count) {
  std::vector<double> x(count);
  for (int j = 0; j < count; ++j) {
    const double t = std::cos(M_PI * (j + 0.5) / count);
    x[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return x;
}

Chebyshev Chebyshev::from_node_values(const std::vector<double>& values, double a, double b) {
  const int n = static_cast<int>(values.size());
  Chebyshev c;
  c.a_ = a;
  c.b_ = b;
  c.coeffs_.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += values[j] * std::cos(M_PI * k * (j + 0.5) / n);
    c.coeffs_[k] = 2.0 * s / n;
  }
  c.coeffs_[0] *= 0.5;
  return c;
}

Chebyshev::Chebyshev(const std::function<double(double)>& f, double a, double b, int degree) {
  const auto x = nodes(a, b, degree + 1);
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) v[j] = f(x[j]);
  *this = from_node_values(v, a, b);
}

double Chebyshev::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (coeffs_.empty() ? 0.0 : coeffs_[0]);
}

Chebyshev Chebyshev::derivative() const {
  Chebyshev d;
  d.a_ = a_;
  d.b_ = b_;
  const std::size_t n = coeffs_.size();
  if (n < 2) {
    d.coeffs_.assign(1, 0.0);
    return d;
  }
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) c[k - 1] = c[k + 1] + 2.0 * k * coeffs_[k];
  c[0] *= 0.5;
  const double scale = 2.0 / (b_ - a_);
  d.coeffs_.assign(c.begin(), c.begin() + (n - 1));
  for (double& v : d.coeffs_) v *= scale;
  return d;
}

}  // namespace revivalkit
