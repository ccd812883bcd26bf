#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace revivalkit {

enum class PeriodicityCase { kOddQ, kHalfQOdd, kHalfQEven };

struct PeriodicitySet {
  std::int64_t generator;  // minimal positive period; the set is generator * Z
  PeriodicityCase kind;
  std::string describe() const;  // e.g. "3Z"
};

// Periods l of n -> exp(-2 pi i (p/q) (n - n0)^2).
PeriodicitySet periodicity_set(std::int64_t p, std::int64_t q);

// q | (2 p l m + p l^2) for every m in [m_lo, m_hi].
bool verify_periodicity(std::int64_t p, std::int64_t q, std::int64_t ell, std::int64_t m_lo,
                        std::int64_t m_hi);

// One period of an l-periodic complex sequence, values at n = 0 ... l-1.
struct PeriodicSequence {
  std::vector<std::complex<double>> values;
  std::size_t period() const { return values.size(); }
};

std::complex<double> inner_product(const PeriodicSequence& u, const PeriodicSequence& v);

// phi^k_n = exp(-2 pi i k n / l)
PeriodicSequence fourier_basis(std::int64_t ell, std::int64_t k);
PeriodicSequence quadratic_phase_sequence(std::int64_t p, std::int64_t q, std::int64_t n0,
                                          std::int64_t ell);

struct RevivalCoefficients {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::int64_t n0 = 0;
  std::int64_t ell = 1;
  std::vector<std::complex<double>> b;
  std::vector<std::complex<double>> b_tilde;  // exp(-2 pi i k n0 / l) b_k
};

// Uses the minimal period from periodicity_set.
// b_k = <sigma, phi^k>, so sigma = sum_k b_k phi^k.
RevivalCoefficients coefficients(std::int64_t p, std::int64_t q, std::int64_t n0);
// Any valid period ell (checked with verify_periodicity over one period of m).
RevivalCoefficients coefficients(std::int64_t p, std::int64_t q, std::int64_t n0, std::int64_t ell);

// Closed-form |b_k|^2 over the minimal period.
std::vector<double> modulus_law(std::int64_t p, std::int64_t q);
// Same over an explicit period: l = q for q odd or q = 2 mod 4, and
// l in {q/2, q} for q divisible by 4.
std::vector<double> modulus_law(std::int64_t p, std::int64_t q, std::int64_t ell);

// Table rows k, Re b_k, Im b_k, |b_k|^2, expected, pass.
std::string gauss_table_csv(const RevivalCoefficients& c, double tolerance = 1e-12);

}  // namespace revivalkit
