#include "revivalkit/special.hpp"

#include <array>
#include <cmath>

#include "revivalkit/errors.hpp"

namespace revivalkit {
namespace {

using cplx = std::complex<double>;

// B_2, B_4, ..., B_16
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,   -1.0 / 30.0,    1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

constexpr double kShiftTarget = 20.0;

int shift_count(cplx z) {
  if (!(z.real() > 0.0)) throw DomainError("log-gamma family needs Re z > 0");
  return z.real() >= kShiftTarget ? 0 : static_cast<int>(std::ceil(kShiftTarget - z.real()));
}

}  // namespace

cplx log_gamma(cplx z) {
  const int n = shift_count(z);
  cplx shift_sum = 0.0;
  for (int k = 0; k < n; ++k) shift_sum += std::log(z + static_cast<double>(k));
  const cplx w = z + static_cast<double>(n);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double m = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / (m * (m - 1.0)) * power;
    power *= inv2;
  }
  const cplx stirling = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * M_PI) + series;
  return stirling - shift_sum;
}

cplx polygamma(int n, cplx z) {
  if (n < 0 || n > 2) throw DomainError("polygamma order must be 0, 1 or 2");
  const int shift = shift_count(z);
  cplx acc = 0.0;
  for (int k = 0; k < shift; ++k) {
    const cplx u = z + static_cast<double>(k);
    if (n == 0) acc -= 1.0 / u;
    if (n == 1) acc += 1.0 / (u * u);
    if (n == 2) acc -= 2.0 / (u * u * u);
  }
  const cplx w = z + static_cast<double>(shift);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx value;
  if (n == 0) {
    value = std::log(w) - 0.5 * inv;
    cplx power = inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
      const double m = 2.0 * static_cast<double>(k + 1);
      value -= kBernoulli[k] / m * power;
      power *= inv2;
    }
  } else if (n == 1) {
    value = inv + 0.5 * inv2;
    cplx power = inv2 * inv;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
      value += kBernoulli[k] * power;
      power *= inv2;
    }
  } else {
    value = -inv2 - inv2 * inv;
    cplx power = inv2 * inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
      const double m = 2.0 * static_cast<double>(k + 1);
      value -= (m + 1.0) * kBernoulli[k] * power;
      power *= inv2;
    }
  }
  return value + acc;
}

double arg_gamma_half(double y) { return log_gamma(cplx(0.5, y)).imag(); }

}  // namespace revivalkit
