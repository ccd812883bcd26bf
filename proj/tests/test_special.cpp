#include <cmath>
#include <complex>

#include "doctest.h"
#include "revivalkit/errors.hpp"
#include "revivalkit/jet.hpp"
#include "revivalkit/special.hpp"

using namespace revivalkit;
using cd = std::complex<double>;

namespace {

// Weierstrass product: log Gamma(z) = -g z - log z + sum_k [z/k - log(1 + z/k)],
// truncated at K with the z^2 / (2K) tail folded back in.
cd weierstrass_log_gamma(cd z, long terms = 2000000) {
  const double euler = 0.57721566490153286061;
  cd s = -euler * z - std::log(z);
  for (long k = terms; k >= 1; --k) {
    const double kk = static_cast<double>(k);
    s += z / kk - std::log(1.0 + z / kk);
  }
  s += z * z / (2.0 * static_cast<double>(terms));
  return s;
}

}  // namespace

TEST_CASE("arg Gamma(1/2 + i) against an independent product evaluation") {
  const double oracle = weierstrass_log_gamma(cd(0.5, 1.0)).imag();
  CHECK(arg_gamma_half(1.0) == doctest::Approx(oracle).epsilon(1e-10));
  // mpmath, 30 digits
  CHECK(std::abs(arg_gamma_half(1.0) - (-0.955007724342569109563)) < 1e-12);
}

TEST_CASE("arg Gamma(1/2 + iy) is odd and vanishes at 0") {
  CHECK(arg_gamma_half(0.0) == 0.0);
  for (double y : {0.1, 0.7, 3.0, 12.5}) CHECK(arg_gamma_half(-y) == doctest::Approx(-arg_gamma_half(y)));
}

TEST_CASE("continuous branch far up the critical line") {
  // mpmath loggamma(0.5 + 40i).imag: the principal arg would wrap.
  CHECK(std::abs(arg_gamma_half(40.0) - 107.556219869209061237) < 1e-10);
}

TEST_CASE("log Gamma off the axis") {
  const cd v = log_gamma(cd(3.7, -2.2));
  CHECK(std::abs(v - cd(0.726446751624426474, -2.718064292441145666)) < 1e-12);
  const cd oracle = weierstrass_log_gamma(cd(3.7, -2.2));
  CHECK(std::abs(v - oracle) < 1e-8);
}

TEST_CASE("polygamma values") {
  const cd z(0.5, 1.0);
  CHECK(std::abs(polygamma(0, z) - cd(-0.0517616509944125428, 1.56494051781587928)) < 1e-12);
  CHECK(std::abs(polygamma(1, z) - cd(0.0367245519410145446, -1.11706865782960013)) < 1e-12);
  CHECK(std::abs(polygamma(2, z) - cd(1.35164190084126104, 0.229886957324509824)) < 1e-11);
  CHECK(polygamma(0, 1.0).real() == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
  CHECK(polygamma(1, 1.0).real() == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-13));
  CHECK(polygamma(2, 1.0).real() == doctest::Approx(-2.4041138063191886).epsilon(1e-13));
}

TEST_CASE("polygamma matches finite differences of log Gamma") {
  const cd z(1.3, 0.8);
  const double d = 1e-5;
  const cd fd = (log_gamma(z + d) - log_gamma(z - d)) / (2 * d);
  CHECK(std::abs(fd - polygamma(0, z)) < 1e-8);
  const cd fd1 = (polygamma(0, z + d) - polygamma(0, z - d)) / (2 * d);
  CHECK(std::abs(fd1 - polygamma(1, z)) < 1e-8);
}

TEST_CASE("left half plane is rejected") {
  CHECK_THROWS_AS(log_gamma(cd(-0.5, 1.0)), DomainError);
  CHECK_THROWS_AS(polygamma(3, cd(1.0, 0.0)), DomainError);
}

TEST_CASE("jets carry exact derivatives") {
  const Jet x = Jet::variable(0.4);
  const Jet f = exp(x) * sin(x);
  // d^k/dx^k of e^x sin x = 2^(k/2) e^x sin(x + k pi / 4)
  for (int k = 0; k <= 3; ++k) {
    const double expect = std::pow(2.0, k / 2.0) * std::exp(0.4) * std::sin(0.4 + k * M_PI / 4);
    CHECK(f.derivative(k) == doctest::Approx(expect).epsilon(1e-13));
  }
  const Jet a = atan2(sqrt(x), cos(x));
  const double d = 1e-4;
  auto g = [](double t) { return std::atan2(std::sqrt(t), std::cos(t)); };
  CHECK(a.derivative(1) == doctest::Approx((g(0.4 + d) - g(0.4 - d)) / (2 * d)).epsilon(1e-7));
  CHECK(a.derivative(2) ==
        doctest::Approx((g(0.4 + d) - 2 * g(0.4) + g(0.4 - d)) / (d * d)).epsilon(1e-5));
}
