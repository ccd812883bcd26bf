#include <cmath>

#include "doctest.h"
#include "revivalkit/errors.hpp"
#include "revivalkit/potential.hpp"

using namespace revivalkit;

namespace {

// Composite Simpson after x = b sin(u) on the E = 0 right lobe, where the
// integrand 2 sqrt(2 (x^2 - x^4)) has a square-root endpoint at x = 1.
double simpson_zero_energy_action(int panels) {
  auto g = [](double u) {
    const double x = std::sin(u);
    return 2.0 * std::sqrt(std::max(0.0, 2.0 * (x * x - x * x * x * x))) * std::cos(u);
  };
  const double a = 0.0, b = M_PI / 2, step = (b - a) / panels;
  double s = g(a) + g(b);
  for (int i = 1; i < panels; ++i) s += g(a + i * step) * (i % 2 ? 4.0 : 2.0);
  return s * step / 3.0;
}

}  // namespace

TEST_CASE("canonical double well values") {
  const auto v = canonical_double_well();
  CHECK(v(0.0) == 0.0);
  CHECK(v.first_derivative(0.0) == 0.0);
  CHECK(v.second_derivative(0.0) == -2.0);
  CHECK(v(1.0 / std::sqrt(2.0)) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(v(-1.0 / std::sqrt(2.0)) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(v.omega() == doctest::Approx(std::sqrt(2.0)));
  CHECK(v.is_even());
  CHECK_NOTHROW(v.check_saddle());
  CHECK(v.grid_minimum() >= -0.25 - 1e-12);
  CHECK(v(std::complex<double>(0.3, 0.2)) ==
        std::pow(std::complex<double>(0.3, 0.2), 4) - std::pow(std::complex<double>(0.3, 0.2), 2));
}

TEST_CASE("potentials without a saddle at 0 are rejected") {
  const auto bowl = Potential::polynomial("bowl", {0, 0, 0.5}, 4.0);
  CHECK_THROWS_AS(bowl.omega(), DomainError);
  CHECK_THROWS_AS(bowl.check_saddle(), DomainError);
  const auto shifted = Potential::polynomial("shifted", {0.1, 0, -1, 0, 1}, 3.0);
  CHECK_THROWS_AS(shifted.check_saddle(), DomainError);
  const auto shallow = Potential::polynomial("shallow", {0, 0, -1, 0, 1}, 1.0);
  CHECK_THROWS_AS(shallow.check_saddle(), DomainError);
}

TEST_CASE("flow period at h = 1e-3 is stable under step halving") {
  const auto v = canonical_double_well();
  const auto coarse = flow_period(v, 1e-3);
  FlowOptions fine;
  fine.step = 0.5e-3;
  const auto refined = flow_period(v, 1e-3, fine);
  CHECK(std::abs(coarse.period - refined.period) <= 1e-3 * refined.period);
  CHECK(coarse.max_energy_drift <= 1e-9);
  CHECK(coarse.closure_distance <= 1e-7);
  CHECK(coarse.energy == doctest::Approx(1e-6 - 1e-3));
  CHECK(coarse.x0 == doctest::Approx(std::sqrt(1e-3)));
  CHECK(coarse.xi0 == 0.0);
  REQUIRE(!coarse.trajectory_samples.empty());
  CHECK(coarse.trajectory_samples.front().t == 0.0);
  for (const auto& s : coarse.trajectory_samples)
    CHECK(std::abs(s.xi * s.xi / 2 + v(s.x) - coarse.energy) <= 1e-9);
}

TEST_CASE("flow period grows as h decreases") {
  const auto v = canonical_double_well();
  double last = 0.0;
  for (double h : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double tau = flow_period(v, h).period;
    CHECK(tau > last);
    last = tau;
  }
}

TEST_CASE("flow period failure modes") {
  const auto v = canonical_double_well();
  FlowOptions short_run;
  short_run.max_time = 1.0;
  CHECK_THROWS_AS(flow_period(v, 1e-3, short_run), NonClosingOrbit);
  FlowOptions strict;
  strict.step = 0.05;
  strict.energy_tolerance = 1e-14;
  CHECK_THROWS_AS(flow_period(v, 1e-3, strict), ToleranceFailure);
  CHECK_THROWS_AS(flow_period(v, 1.5), DomainError);
}

TEST_CASE("leading epsilon") {
  const auto v = canonical_double_well();
  CHECK(leading_actions(v, 0.0, 0.1).leading_epsilon == 0.0);
  CHECK(leading_actions(v, 0.01, 0.1).leading_epsilon == doctest::Approx(0.0070710678).epsilon(1e-9));
  // derivative of the contour invariant at the saddle energy
  const double d = 1e-4;
  const double r = saddle_contour_radius(v, 0.1);
  const double slope = (saddle_invariant(v, d, r) - saddle_invariant(v, -d, r)) / (2 * d);
  CHECK(slope == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(std::abs(saddle_invariant(v, 0.0, r)) < 1e-13);
}

TEST_CASE("zero-energy action against quadrature refinement and closed form") {
  const auto v = canonical_double_well();
  const double s0 = leading_actions(v, 0.0, 0.1).leading_action_plus;
  const double coarse = simpson_zero_energy_action(2000);
  const double fine = simpson_zero_energy_action(4000);
  CHECK(std::abs(coarse - fine) < 1e-6);
  CHECK(std::abs(s0 - fine) < 1e-6);
  // 2 sqrt(2) int_0^1 x sqrt(1 - x^2) dx
  CHECK(s0 == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-13));
}

TEST_CASE("lobe turning points") {
  const auto v = canonical_double_well();
  const double E = -0.05;
  const auto [a, b] = lobe_turning_points(v, E, +1);
  CHECK(a == doctest::Approx(std::sqrt((1 - std::sqrt(1 + 4 * E)) / 2)).epsilon(1e-13));
  CHECK(b == doctest::Approx(std::sqrt((1 + std::sqrt(1 + 4 * E)) / 2)).epsilon(1e-13));
  const auto [c, d] = lobe_turning_points(v, E, -1);
  CHECK(c == doctest::Approx(-a));
  CHECK(d == doctest::Approx(-b));
  CHECK_THROWS_AS(lobe_turning_points(v, -0.3, +1), TopologyError);
}

TEST_CASE("actions are symmetric and smooth for the even well") {
  const auto v = canonical_double_well();
  const double step = 0.01;
  std::vector<double> s;
  for (int i = -10; i <= 10; ++i) {
    const auto a = leading_actions(v, i * step, 0.1);
    CHECK(a.leading_action_plus == doctest::Approx(a.leading_action_minus).epsilon(1e-12));
    s.push_back(a.leading_action_plus);
  }
  // second divided differences stay bounded across the saddle energy
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    CHECK(std::abs(s[i + 1] - 2 * s[i] + s[i - 1]) / (step * step) < 10.0);
  CHECK_THROWS_AS(leading_actions(v, 0.2, 0.1), DomainError);
}

TEST_CASE("action table reproduces direct quadrature") {
  const auto v = canonical_double_well();
  const ActionTable table(v, 0.1);
  CHECK(table.symmetric());
  CHECK(table.action_at_zero(+1) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-13));
  for (double E : {-0.09, -0.03, 0.0005, 0.04, 0.1}) {
    const auto a = leading_actions(v, E, 0.1);
    CHECK(std::abs(table.action(+1, E) - a.leading_action_plus) < 1e-11);
  }
  const auto jet = table.increment_jet(+1, 0.02);
  const double d = 1e-4;
  auto D = [&](double e) { return (table.action(+1, e) - table.action_at_zero(+1)) / e; };
  CHECK(jet.derivative(1) == doctest::Approx((D(0.02 + d) - D(0.02 - d)) / (2 * d)).epsilon(1e-6));
  CHECK_THROWS_AS(table.action(+1, 0.2), DomainError);
}
