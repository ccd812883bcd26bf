#pragma once

#include <array>
#include <cmath>

namespace revivalkit {

// Truncated Taylor series f(x0 + t) = c0 + c1 t + c2 t^2 + c3 t^3.
// Enough to carry the third derivatives needed by the inverse-function rules.
struct Jet {
  std::array<double, 4> c{};

  static Jet constant(double v) { return Jet{{v, 0.0, 0.0, 0.0}}; }
  static Jet variable(double x0) { return Jet{{x0, 1.0, 0.0, 0.0}}; }

  double value() const { return c[0]; }
  // k-th derivative at the expansion point
  double derivative(int k) const {
    static constexpr std::array<double, 4> kFactorial = {1.0, 1.0, 2.0, 6.0};
    return c[k] * kFactorial[k];
  }
  bool is_zero() const { return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0; }
};

inline Jet operator+(Jet a, const Jet& b) {
  for (int k = 0; k < 4; ++k) a.c[k] += b.c[k];
  return a;
}
inline Jet operator-(Jet a, const Jet& b) {
  for (int k = 0; k < 4; ++k) a.c[k] -= b.c[k];
  return a;
}
inline Jet operator-(Jet a) {
  for (double& x : a.c) x = -x;
  return a;
}
inline Jet operator*(double s, Jet a) {
  for (double& x : a.c) x *= s;
  return a;
}
inline Jet operator+(Jet a, double s) {
  a.c[0] += s;
  return a;
}
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

// g(u(t)) from g and its first three derivatives at u0.
inline Jet compose(const Jet& u, double g0, double g1, double g2, double g3) {
  const double u1 = u.c[1], u2 = u.c[2], u3 = u.c[3];
  return Jet{{g0, g1 * u1, g1 * u2 + 0.5 * g2 * u1 * u1,
              g1 * u3 + g2 * u1 * u2 + g3 * u1 * u1 * u1 / 6.0}};
}

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.c[0]);
  return compose(u, e, e, e, e);
}
inline Jet sin(const Jet& u) {
  const double s = std::sin(u.c[0]), c = std::cos(u.c[0]);
  return compose(u, s, c, -s, -c);
}
inline Jet cos(const Jet& u) {
  const double s = std::sin(u.c[0]), c = std::cos(u.c[0]);
  return compose(u, c, -s, -c, s);
}
inline Jet sqrt(const Jet& u) {
  const double r = std::sqrt(u.c[0]);
  return compose(u, r, 0.5 / r, -0.25 / (r * u.c[0]), 0.375 / (r * u.c[0] * u.c[0]));
}
inline Jet reciprocal(const Jet& u) {
  const double v = 1.0 / u.c[0];
  return compose(u, v, -v * v, 2.0 * v * v * v, -6.0 * v * v * v * v);
}

// atan2(y, x) as a jet. Built from its derivative (x y' - y x')/(x^2 + y^2),
// which stays regular when x crosses zero.
inline Jet atan2(const Jet& y, const Jet& x) {
  auto diff = [](const Jet& f) { return Jet{{f.c[1], 2.0 * f.c[2], 3.0 * f.c[3], 0.0}}; };
  const Jet q = (x * diff(y) - y * diff(x)) * reciprocal(x * x + y * y);
  return Jet{{std::atan2(y.c[0], x.c[0]), q.c[0], q.c[1] / 2.0, q.c[2] / 3.0}};
}

}  // namespace revivalkit
