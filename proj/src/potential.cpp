#include "revivalkit/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "revivalkit/errors.hpp"

namespace revivalkit {

Potential::Potential(std::string descriptor, ComplexFn value, RealFn first_derivative,
                     RealFn second_derivative, double domain_halfwidth, bool even)
    : descriptor_(std::move(descriptor)),
      value_(std::move(value)),
      d1_(std::move(first_derivative)),
      d2_(std::move(second_derivative)),
      halfwidth_(domain_halfwidth),
      even_(even) {
  if (!(halfwidth_ > 0.0)) throw DomainError("domain half-width must be positive");
}

Potential Potential::polynomial(std::string descriptor, std::vector<double> c,
                                double domain_halfwidth) {
  bool even = true;
  for (std::size_t k = 1; k < c.size(); k += 2) even = even && c[k] == 0.0;
  auto horner = [c](auto x) {
    decltype(x) acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
  };
  std::vector<double> c1, c2;
  for (std::size_t k = 1; k < c.size(); ++k) c1.push_back(static_cast<double>(k) * c[k]);
  for (std::size_t k = 1; k < c1.size(); ++k) c2.push_back(static_cast<double>(k) * c1[k]);
  auto real_horner = [](std::vector<double> coeffs) {
    return [coeffs](double x) {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
      return acc;
    };
  };
  return Potential(
      std::move(descriptor), [horner](std::complex<double> z) { return horner(z); },
      real_horner(c1), real_horner(c2), domain_halfwidth, even);
}

double Potential::omega() const {
  const double curvature = second_derivative(0.0);
  if (!(curvature < 0.0)) throw DomainError("V''(0) must be negative at the saddle");
  return std::sqrt(-curvature);
}

void Potential::check_saddle(double tolerance) const {
  if (std::abs((*this)(0.0)) > tolerance) throw DomainError("V(0) != 0 for " + descriptor_);
  if (std::abs(first_derivative(0.0)) > tolerance)
    throw DomainError("V'(0) != 0 for " + descriptor_);
  omega();
  if (!((*this)(halfwidth_) > 1.0 && (*this)(-halfwidth_) > 1.0))
    throw DomainError("V(+-L) must exceed 1 for " + descriptor_);
}

double Potential::grid_minimum(int samples) const {
  double m = (*this)(-halfwidth_);
  for (int j = 1; j < samples; ++j)
    m = std::min(m, (*this)(-halfwidth_ + 2.0 * halfwidth_ * j / (samples - 1)));
  return m;
}

Potential canonical_double_well() {
  return Potential::polynomial("x^4 - x^2", {0.0, 0.0, -1.0, 0.0, 1.0}, 3.0);
}

namespace {

using State = std::pair<double, double>;

// Fourth-order Yoshida composition of the leapfrog map.
State yoshida_step(const Potential& v, State s, double dt) {
  static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  static const double w0 = -std::cbrt(2.0) * w1;
  static const double c[4] = {w1 / 2, (w0 + w1) / 2, (w0 + w1) / 2, w1 / 2};
  static const double d[3] = {w1, w0, w1};
  auto [x, xi] = s;
  for (int k = 0; k < 3; ++k) {
    x += c[k] * dt * xi;
    xi -= d[k] * dt * v.first_derivative(x);
  }
  x += c[3] * dt * xi;
  return {x, xi};
}

double hamiltonian(const Potential& v, State s) { return 0.5 * s.second * s.second + v(s.first); }

}  // namespace

ClassicalOrbitResult flow_period(const Potential& v, double h, const FlowOptions& options) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("flow_period needs 0 < h < 1");
  ClassicalOrbitResult out;
  out.x0 = std::sqrt(h);
  out.xi0 = 0.0;
  State s{out.x0, out.xi0};
  out.energy = hamiltonian(v, s);
  const double dt = options.step;
  const long max_steps = static_cast<long>(std::ceil(options.max_time / dt));
  const long stride = std::max<long>(1, max_steps / static_cast<long>(options.max_samples));
  bool passed_outer_turn = false;
  double t = 0.0;
  out.trajectory_samples.push_back({0.0, s.first, s.second});
  for (long step = 0; step < max_steps; ++step) {
    State next = yoshida_step(v, s, dt);
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(hamiltonian(v, next) - out.energy));
    if (out.max_energy_drift > options.energy_tolerance)
      throw ToleranceFailure("energy drift " + std::to_string(out.max_energy_drift) +
                             " exceeds tolerance");
    if (s.second > 0.0 && next.second <= 0.0) passed_outer_turn = true;
    if (passed_outer_turn && s.second < 0.0 && next.second >= 0.0 &&
        std::abs(next.first - out.x0) < 0.5 * out.x0 + 10.0 * dt) {
      // Bisection on the sub-step length for the zero of xi.
      double lo = 0.0, hi = dt;
      for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (yoshida_step(v, s, mid).second < 0.0)
          lo = mid;
        else
          hi = mid;
        if (mid == lo && mid == hi) break;
      }
      const State end = yoshida_step(v, s, hi);
      out.period = t + hi;
      out.steps = step + 1;
      out.closure_distance = std::hypot(end.first - out.x0, end.second - out.xi0);
      out.trajectory_samples.push_back({out.period, end.first, end.second});
      if (out.closure_distance > options.closure_tolerance)
        throw ToleranceFailure("orbit closure distance " + std::to_string(out.closure_distance));
      return out;
    }
    s = next;
    t += dt;
    if ((step + 1) % stride == 0) out.trajectory_samples.push_back({t, s.first, s.second});
  }
  throw NonClosingOrbit("no return to the initial point within t = " +
                        std::to_string(options.max_time));
}

std::pair<double, double> lobe_turning_points(const Potential& v, double energy, int sign) {
  const double s = sign > 0 ? 1.0 : -1.0;
  const double width = v.domain_halfwidth();
  const int samples = 20000;
  auto f = [&](double r) { return v(s * r) - energy; };
  auto refine = [&](double a, double b) {
    boost::math::tools::eps_tolerance<double> tol(52);
    auto r = boost::math::tools::bisect(f, a, b, tol);
    return 0.5 * (r.first + r.second);
  };
  double inner = 0.0;
  double prev = 0.0;
  int k = 1;
  if (energy < 0.0) {
    for (; k <= samples; ++k) {
      const double r = width * k / samples;
      if (f(r) < 0.0) {
        inner = refine(prev, r);
        break;
      }
      prev = r;
    }
    if (k > samples) throw TopologyError("inner turning point not bracketed");
  }
  for (; k <= samples; ++k) {
    const double r = width * k / samples;
    if (f(r) > 0.0) return {s * inner, s * refine(prev, r)};
    prev = r;
  }
  throw TopologyError("outer turning point not bracketed at E = " + std::to_string(energy));
}

double lobe_action(const Potential& v, double energy, int sign, const QuadratureOptions& options) {
  auto [a, b] = lobe_turning_points(v, energy, sign);
  if (a > b) std::swap(a, b);
  auto integrand = [&](double x) { return 2.0 * std::sqrt(std::max(0.0, 2.0 * (energy - v(x)))); };
  boost::math::quadrature::tanh_sinh<double> integrator(options.max_refinements);
  return integrator.integrate(integrand, a, b, options.tolerance);
}

double saddle_invariant(const Potential& v, double energy, double radius, int points) {
  using cplx = std::complex<double>;
  cplx sum = 0.0;
  cplx prev = 0.0;
  for (int k = 0; k < points; ++k) {
    const double th = 2.0 * M_PI * k / points;
    const cplx z = std::polar(radius, th);
    cplx r = std::sqrt(2.0 * (energy - v(z)));
    if (k == 0) {
      if (r.real() < 0.0) r = -r;
    } else if (std::abs(r - prev) > std::abs(r + prev)) {
      r = -r;
    }
    prev = r;
    sum += r * cplx(0.0, 1.0) * z;
  }
  const cplx integral = sum * (2.0 * M_PI / points) / cplx(0.0, 2.0 * M_PI);
  return integral.real();
}

namespace {

int winding_count(const Potential& v, double energy, double radius) {
  const int points = 4096;
  double total = 0.0;
  double prev = std::arg(energy - v(std::complex<double>(radius, 0.0)));
  for (int k = 1; k <= points; ++k) {
    const double a = std::arg(energy - v(std::polar(radius, 2.0 * M_PI * k / points)));
    double d = a - prev;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    total += d;
    prev = a;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace

double saddle_contour_radius(const Potential& v, double delta) {
  double r_in = 0.0;
  double r_out = v.domain_halfwidth();
  for (int sign : {1, -1}) {
    auto [a, b] = lobe_turning_points(v, -delta, sign);
    r_in = std::max(r_in, std::abs(a));
    r_out = std::min(r_out, std::abs(b));
    r_out = std::min(r_out, std::abs(lobe_turning_points(v, delta, sign).second));
  }
  const double radius = std::sqrt(1.5 * r_in * r_out);
  for (double e : {-delta, 0.0, delta}) {
    if (winding_count(v, e, radius) != 2)
      throw TopologyError("saddle contour does not enclose exactly two turning points");
  }
  return radius;
}

namespace {

double regularization(double e) { return e == 0.0 ? 0.0 : e * std::log(std::abs(e)) - e; }

}  // namespace

ActionData leading_actions(const Potential& v, double energy, double delta,
                           const QuadratureOptions& options) {
  if (!(std::abs(energy) <= delta)) throw DomainError("|E| must not exceed delta");
  ActionData out;
  out.energy = energy;
  out.leading_epsilon = energy / v.omega();
  out.epsilon_invariant = saddle_invariant(v, energy, saddle_contour_radius(v, delta));
  const double reg = regularization(out.epsilon_invariant);
  out.leading_action_plus = lobe_action(v, energy, +1, options) + reg;
  out.leading_action_minus = lobe_action(v, energy, -1, options) + reg;
  return out;
}

ActionTable::ActionTable(const Potential& v, double delta, int nodes)
    : delta_(delta), symmetric_(v.is_even()) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (nodes % 2 != 0) ++nodes;  // keep E = 0 off the node set
  const double radius = saddle_contour_radius(v, delta);
  auto s0 = [&](double e, int sign) {
    return lobe_action(v, e, sign) + regularization(saddle_invariant(v, e, radius));
  };
  s_plus0_ = s0(0.0, +1);
  s_minus0_ = symmetric_ ? s_plus0_ : s0(0.0, -1);
  const auto x = Chebyshev::nodes(-delta, delta, nodes);
  auto build = [&](int sign, double s_zero) {
    std::vector<double> d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) d[j] = (s0(x[j], sign) - s_zero) / x[j];
    std::vector<Chebyshev> out{Chebyshev::from_node_values(d, -delta, delta)};
    for (int k = 0; k < 3; ++k) out.push_back(out.back().derivative());
    return out;
  };
  d_plus_ = build(+1, s_plus0_);
  d_minus_ = symmetric_ ? d_plus_ : build(-1, s_minus0_);
}

double ActionTable::action(int sign, double energy) const {
  if (!(std::abs(energy) <= delta_ * (1.0 + 1e-12)))
    throw DomainError("energy outside the action table range");
  const auto& d = sign > 0 ? d_plus_ : d_minus_;
  return action_at_zero(sign) + energy * d[0](energy);
}

Jet ActionTable::increment_jet(int sign, double energy) const {
  if (!(std::abs(energy) <= delta_ * (1.0 + 1e-12)))
    throw DomainError("energy outside the action table range");
  const auto& d = sign > 0 ? d_plus_ : d_minus_;
  return Jet{{d[0](energy), d[1](energy), d[2](energy) / 2.0, d[3](energy) / 6.0}};
}

}  // namespace revivalkit
