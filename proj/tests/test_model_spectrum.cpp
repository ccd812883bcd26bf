#include <cmath>
#include <memory>

#include "doctest.h"
#include "revivalkit/errors.hpp"
#include "revivalkit/fit.hpp"
#include "revivalkit/model_spectrum.hpp"
#include "revivalkit/special.hpp"

using namespace revivalkit;

namespace {

std::shared_ptr<const ActionTable> shared_table() {
  static const auto table = std::make_shared<const ActionTable>(canonical_double_well(), 0.1);
  return table;
}

SpectralModel model(double h) { return SpectralModel(canonical_double_well(), shared_table(), h); }

}  // namespace

TEST_CASE("f_h at the saddle energy") {
  const auto m = model(1e-3);
  const double expect = -(m.theta(+1, 0.0) + m.theta(-1, 0.0)) / 2 + M_PI / 2;
  CHECK(f_h(m, 0.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(g_h(m, 0.0) == doctest::Approx(0.0));
  // theta = (S0 + h S1) / h with S1 = -pi / 2
  CHECK(m.theta(+1, 0.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0) / 3.0 / 1e-3 - M_PI / 2).epsilon(1e-13));
}

TEST_CASE("f_h slope is ln h / omega plus an h-independent remainder") {
  std::vector<double> rest;
  for (double h : {1e-2, 1e-3, 1e-4, 1e-5, 1e-8}) {
    const auto m = model(h);
    const double d = 1e-4;
    const double slope = (f_h(m, d) - f_h(m, -d)) / (2 * d);
    rest.push_back(slope - std::log(h) / std::sqrt(2.0));
  }
  for (double r : rest) {
    CHECK(std::abs(r) < 5.0);
    CHECK(r == doctest::Approx(rest.back()).epsilon(1e-5));
  }
}

TEST_CASE("Z - Y is twice the arccos term") {
  const auto m = model(1e-3);
  for (int j = -20; j <= 20; ++j) {
    const double lambda = j / 20.0;
    const double diff = Z_h(m, lambda) - Y_h(m, lambda);
    CHECK(diff >= 0.0);
    CHECK(diff <= 2 * M_PI);
    const double arg = m.phases(lambda).arccos_argument;
    CHECK(diff == doctest::Approx(2 * std::acos(arg)).epsilon(1e-9));
  }
}

TEST_CASE("arccos argument at lambda = 1") {
  // leading epsilon: 2 pi eps(h) / h = 2 pi / sqrt 2 = sqrt 2 pi
  CHECK(std::exp(2 * M_PI / std::sqrt(2.0)) == doctest::Approx(85.019695).epsilon(1e-7));
  for (double h : {1e-3, 1e-4, 1e-5}) {
    const auto m = model(h);
    const double growth = std::exp(2 * M_PI * m.epsilon(h) / h);
    // the full invariant departs from the leading term by O(h)
    CHECK(std::abs(std::log(growth) - 2 * M_PI / std::sqrt(2.0)) <= 4 * M_PI * h);
    CHECK(m.phases(1.0).arccos_argument ==
          doctest::Approx(std::cos(g_h(m, 1.0)) / std::sqrt(1.0 + growth)).epsilon(1e-12));
  }
}

TEST_CASE("Y_h' at h = 1e-4 is ln h / sqrt 2 plus an O(1) remainder") {
  const double lead = std::log(1e-4) / std::sqrt(2.0);
  CHECK(lead == doctest::Approx(-6.5127).epsilon(1e-4));
  const double rest = derivatives_Y(model(1e-4), 0.0, 1) - lead;
  CHECK(std::abs(rest) < 5.0);
  for (double h : {1e-3, 1e-6, 1e-9})
    CHECK(derivatives_Y(model(h), 0.0, 1) - std::log(h) / std::sqrt(2.0) ==
          doctest::Approx(rest).epsilon(1e-5));
}

TEST_CASE("analytic derivatives against central differences") {
  const auto m = model(1e-3);
  const double lambda = 0.3, d = 1e-4;
  const double fd1 = (Y_h(m, lambda + d) - Y_h(m, lambda - d)) / (2 * d);
  CHECK(derivatives_Y(m, lambda, 1) == doctest::Approx(fd1).epsilon(1e-6));
  const double fd2 = (derivatives_Y(m, lambda + d, 1) - derivatives_Y(m, lambda - d, 1)) / (2 * d);
  CHECK(derivatives_Y(m, lambda, 2) == doctest::Approx(fd2).epsilon(1e-6));
  const double fd3 = (derivatives_Y(m, lambda + d, 2) - derivatives_Y(m, lambda - d, 2)) / (2 * d);
  CHECK(derivatives_Y(m, lambda, 3) == doctest::Approx(fd3).epsilon(1e-6));
  const double fz = (derivatives_Z(m, lambda + d, 2) - derivatives_Z(m, lambda - d, 2)) / (2 * d);
  CHECK(derivatives_Z(m, lambda, 3) == doctest::Approx(fz).epsilon(1e-6));
  CHECK_THROWS_AS(derivatives_Y(m, 0.0, 4), DomainError);
}

TEST_CASE("second derivative stays bounded in h") {
  for (double h : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const auto m = model(h);
    for (int j = -10; j <= 10; ++j) CHECK(std::abs(derivatives_Y(m, j / 10.0, 2)) < 10.0);
  }
}

TEST_CASE("domain guards") {
  const auto m = model(1e-3);
  CHECK_THROWS_AS(f_h(m, 1.5), DomainError);
  CHECK_THROWS_AS(Y_h(m, -1.01), DomainError);
  CHECK_THROWS_AS(model(0.5), DomainError);
  CHECK_THROWS_AS(model(0.0), DomainError);
}

TEST_CASE("inverse function derivatives") {
  // Y(x) = x^3 + 2x around x = 1: Y' = 5, Y'' = 6, Y''' = 6
  const Jet x = Jet::variable(1.0);
  const Jet y = x * x * x + 2.0 * x;
  const auto inv = inverse_derivatives(y);
  CHECK(inv.first == doctest::Approx(0.2));
  CHECK(inv.second == doctest::Approx(-6.0 / 125.0));
  CHECK(inv.third == doctest::Approx(-6.0 / 625.0 + 3.0 * 36.0 / 3125.0));
}

TEST_CASE("families at h = 1e-4: residuals, interleaving and ordering") {
  const auto m = model(1e-4);
  const auto w = solve_families(m);
  REQUIRE(w.alphas.size() >= 2);
  REQUIRE(w.betas.size() >= 2);
  for (const auto& l : w.alphas) {
    CHECK(std::abs(Y_h(m, l.lambda) - 2 * M_PI * l.index) <= 1e-10 * std::abs(2 * M_PI * l.index) + 1e-9);
    CHECK(std::abs(l.residual) <= 1e-10);
    CHECK(std::abs(l.eigenvalue) <= 1e-4);
  }
  for (const auto& l : w.betas) CHECK(std::abs(l.residual) <= 1e-10);
  // ascending eigenvalues, descending index
  for (std::size_t j = 1; j < w.alphas.size(); ++j) {
    CHECK(w.alphas[j].eigenvalue > w.alphas[j - 1].eigenvalue);
    CHECK(w.alphas[j].index == w.alphas[j - 1].index - 1);
  }
  // beta_{k+1} < alpha_k < beta_k
  const auto merged = w.merged();
  for (std::size_t j = 0; j < merged.size(); ++j) {
    bool is_alpha = false;
    for (const auto& l : w.alphas) is_alpha = is_alpha || l.eigenvalue == merged[j];
    if (j > 0) {
      bool prev_alpha = false;
      for (const auto& l : w.alphas) prev_alpha = prev_alpha || l.eigenvalue == merged[j - 1];
      CHECK(is_alpha != prev_alpha);
    }
  }
  CHECK(w.alpha_indices.size() == static_cast<std::int64_t>(w.alphas.size()));
  CHECK(w.beta_indices.size() == static_cast<std::int64_t>(w.betas.size()));
}

TEST_CASE("window count follows the smooth counting function") {
  // Card(I_h) = (f_h(-1) - f_h(1)) / 2 pi up to one level, and the smooth
  // count is linear in |ln h|. The integer count itself only has 2-7
  // levels at representable h, so its fit is checked in the acceptance run.
  std::vector<double> L, smooth;
  for (double h : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-10, 1e-12}) {
    const auto m = model(h);
    const auto w = solve_families(m);
    const double s = (Y_h(m, -1.0) - Y_h(m, 1.0)) / (2 * M_PI);
    CHECK(std::abs(static_cast<double>(w.alpha_indices.size()) - s) <= 1.0);
    L.push_back(std::abs(std::log(h)));
    smooth.push_back(s);
  }
  const auto fit = fit_line(L, smooth);
  CHECK(fit.slope == doctest::Approx(1.0 / (M_PI * std::sqrt(2.0))).epsilon(0.05));
  CHECK(fit.max_rel_residual <= 0.05);
}

TEST_CASE("inverse derivative scaling") {
  for (double h : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const auto m = model(h);
    const auto w = solve_families(m);
    const double L = std::abs(std::log(h));
    for (const auto& l : w.alphas) {
      CHECK(std::abs(l.inverse.second) * L * L * L < 50.0);
      CHECK(std::abs(l.inverse.third) * L * L * L * L < 200.0);
    }
  }
}

TEST_CASE("ladders beyond the window") {
  const auto m = model(1e-3);
  const auto w = solve_families(m);
  const auto k = w.alpha_indices.first;
  const auto ladder = solve_ladder(m, Family::kAlpha, k - 5, k + 5);
  REQUIRE(ladder.size() == 11);
  for (const auto& l : ladder)
    if (w.alpha_indices.contains(l.index)) {
      bool found = false;
      for (const auto& a : w.alphas) found = found || std::abs(a.lambda - l.lambda) < 1e-12;
      CHECK(found);
    }
  CHECK_THROWS_AS(solve_ladder(m, Family::kAlpha, k + 100000, k + 100000), SupportError);
}

TEST_CASE("spectrum csv schema") {
  const auto w = solve_families(model(1e-3));
  const auto csv = spectrum_csv(w);
  CHECK(csv.rfind("family,index,lambda,eigenvalue,gap_to_next\n", 0) == 0);
  CHECK(csv.find("alpha,") != std::string::npos);
  CHECK(csv.find("beta,") != std::string::npos);
}
