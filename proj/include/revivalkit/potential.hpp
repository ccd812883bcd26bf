#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "revivalkit/chebyshev.hpp"
#include "revivalkit/jet.hpp"

namespace revivalkit {

// A confining one-dimensional potential with a non-degenerate maximum at
// x = 0. The complex evaluator is needed for the contour integral that gives
// the normal-form invariant near the saddle.
class Potential {
 public:
  using RealFn = std::function<double(double)>;
  using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

  Potential(std::string descriptor, ComplexFn value, RealFn first_derivative,
            RealFn second_derivative, double domain_halfwidth, bool even);

  // c[0] + c[1] x + c[2] x^2 + ...
  static Potential polynomial(std::string descriptor, std::vector<double> coefficients,
                              double domain_halfwidth);

  double operator()(double x) const { return value_(std::complex<double>(x, 0.0)).real(); }
  std::complex<double> operator()(std::complex<double> z) const { return value_(z); }
  double first_derivative(double x) const { return d1_(x); }
  double second_derivative(double x) const { return d2_(x); }

  const std::string& descriptor() const { return descriptor_; }
  double domain_halfwidth() const { return halfwidth_; }
  bool is_even() const { return even_; }

  // sqrt(-V''(0)); throws DomainError when x = 0 is not a saddle.
  double omega() const;
  // Checks V(0) = V'(0) = 0, V''(0) < 0 and V(+-L) > 1.
  void check_saddle(double tolerance = 1e-12) const;
  double grid_minimum(int samples = 20001) const;

 private:
  std::string descriptor_;
  ComplexFn value_;
  RealFn d1_;
  RealFn d2_;
  double halfwidth_;
  bool even_;
};

// V(x) = x^4 - x^2 on [-3, 3].
Potential canonical_double_well();

struct PhaseSample {
  double t;
  double x;
  double xi;
};

struct ClassicalOrbitResult {
  double energy = 0.0;
  double x0 = 0.0;
  double xi0 = 0.0;
  double period = 0.0;
  double max_energy_drift = 0.0;
  double closure_distance = 0.0;
  long steps = 0;
  std::vector<PhaseSample> trajectory_samples;
};

struct FlowOptions {
  double step = 1e-3;
  double max_time = 1e4;
  double energy_tolerance = 1e-9;
  double closure_tolerance = 1e-7;
  std::size_t max_samples = 4096;
};

// Period of the orbit of p = xi^2/2 + V starting at (sqrt(h), 0).
ClassicalOrbitResult flow_period(const Potential& v, double h, const FlowOptions& options = {});

struct ActionData {
  double energy = 0.0;
  double leading_action_plus = 0.0;
  double leading_action_minus = 0.0;
  double leading_epsilon = 0.0;
  // Full normal-form invariant from the contour integral around the saddle.
  // Used to regularize the lobe actions; the spectral functions themselves
  // use leading_epsilon.
  double epsilon_invariant = 0.0;
};

struct QuadratureOptions {
  double tolerance = 1e-14;
  std::size_t max_refinements = 15;
};

// Turning points of the right (sign = +1) or left (sign = -1) lobe at energy E.
// For E >= 0 the inner point is the saddle itself.
std::pair<double, double> lobe_turning_points(const Potential& v, double energy, int sign);

// Closed-loop action of one lobe: twice the integral of sqrt(2(E - V)).
double lobe_action(const Potential& v, double energy, int sign,
                   const QuadratureOptions& options = {});

// Invariant (1/2 pi i) * contour integral of sqrt(2(E - V(z))) dz on a circle
// enclosing the two saddle turning points.
double saddle_invariant(const Potential& v, double energy, double radius, int points = 512);
double saddle_contour_radius(const Potential& v, double delta);

ActionData leading_actions(const Potential& v, double energy, double delta,
                           const QuadratureOptions& options = {});

// Chebyshev tables of S0+- on [-delta, delta], stored as
// S0(E) = S0(0) + E * D(E) so that large phases S0/h can be reduced exactly.
class ActionTable {
 public:
  ActionTable(const Potential& v, double delta, int nodes = 48);

  double delta() const { return delta_; }
  double action_at_zero(int sign) const { return sign > 0 ? s_plus0_ : s_minus0_; }
  double action(int sign, double energy) const;
  // Jet in E of the increment D(E) for the given lobe.
  Jet increment_jet(int sign, double energy) const;
  bool symmetric() const { return symmetric_; }

 private:
  double delta_;
  bool symmetric_;
  double s_plus0_ = 0.0;
  double s_minus0_ = 0.0;
  std::vector<Chebyshev> d_plus_;   // D and its first three derivatives
  std::vector<Chebyshev> d_minus_;
};

}  // namespace revivalkit
