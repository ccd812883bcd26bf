#include "revivalkit/gauss.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "revivalkit/errors.hpp"
#include "revivalkit/format.hpp"

namespace revivalkit {

namespace {

using cplx = std::complex<double>;

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

void require_coprime(std::int64_t p, std::int64_t q) {
  if (q < 1) throw NotCoprime("q must be at least 1");
  if (std::gcd(p, q) != 1)
    throw NotCoprime("gcd(" + std::to_string(p) + ", " + std::to_string(q) + ") != 1");
}

// exp(-2 pi i num / den) for 0 <= num < den
cplx unit(std::int64_t num, std::int64_t den) {
  return std::polar(1.0, -2.0 * M_PI * static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

std::string PeriodicitySet::describe() const { return std::to_string(generator) + "Z"; }

PeriodicitySet periodicity_set(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q % 2 == 1) return {q, PeriodicityCase::kOddQ};
  if ((q / 2) % 2 == 1) return {q, PeriodicityCase::kHalfQOdd};
  return {q / 2, PeriodicityCase::kHalfQEven};
}

bool verify_periodicity(std::int64_t p, std::int64_t q, std::int64_t ell, std::int64_t m_lo,
                        std::int64_t m_hi) {
  require_coprime(p, q);
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const __int128 v = static_cast<__int128>(2) * p * ell * m + static_cast<__int128>(p) * ell * ell;
    if (v % q != 0) return false;
  }
  return true;
}

cplx inner_product(const PeriodicSequence& u, const PeriodicSequence& v) {
  if (u.period() != v.period())
    throw PeriodMismatch("periods " + std::to_string(u.period()) + " and " +
                         std::to_string(v.period()) + " differ");
  if (u.period() == 0) throw PeriodMismatch("empty sequence");
  cplx s = 0.0;
  for (std::size_t k = 0; k < u.period(); ++k) s += u.values[k] * std::conj(v.values[k]);
  return s / static_cast<double>(u.period());
}

PeriodicSequence fourier_basis(std::int64_t ell, std::int64_t k) {
  PeriodicSequence s;
  for (std::int64_t n = 0; n < ell; ++n) s.values.push_back(unit(mod(k * n, ell), ell));
  return s;
}

PeriodicSequence quadratic_phase_sequence(std::int64_t p, std::int64_t q, std::int64_t n0,
                                          std::int64_t ell) {
  require_coprime(p, q);
  PeriodicSequence s;
  for (std::int64_t n = 0; n < ell; ++n) {
    const std::int64_t r = mod(n - n0, q);
    s.values.push_back(unit(mod(mod(p, q) * mod(r * r, q), q), q));
  }
  return s;
}

RevivalCoefficients coefficients(std::int64_t p, std::int64_t q, std::int64_t n0) {
  return coefficients(p, q, n0, periodicity_set(p, q).generator);
}

RevivalCoefficients coefficients(std::int64_t p, std::int64_t q, std::int64_t n0, std::int64_t ell) {
  require_coprime(p, q);
  if (ell < 1 || !verify_periodicity(p, q, ell, 0, q))
    throw DomainError("l = " + std::to_string(ell) + " is not a period of the quadratic phase");
  RevivalCoefficients c{p, q, n0, ell, {}, {}};
  const std::int64_t den = q * ell;
  for (std::int64_t k = 0; k < ell; ++k) {
    cplx s = 0.0;
    for (std::int64_t n = 0; n < ell; ++n) {
      const std::int64_t r = mod(n - n0, q);
      const std::int64_t quad = mod(mod(p, q) * mod(r * r, q), q) * ell;  // (p r^2 / q) * den
      // b_k = <sigma, phi^k>, so the conjugate basis phase enters here.
      const std::int64_t lin = mod(-k * n, ell) * q;                        // (-k n / l) * den
      s += unit(mod(quad + lin, den), den);
    }
    c.b.push_back(s / static_cast<double>(ell));
    c.b_tilde.push_back(unit(mod(mod(k, ell) * mod(n0, ell), ell), ell) * c.b.back());
  }
  return c;
}

std::vector<double> modulus_law(std::int64_t p, std::int64_t q) {
  return modulus_law(p, q, periodicity_set(p, q).generator);
}

std::vector<double> modulus_law(std::int64_t p, std::int64_t q, std::int64_t ell) {
  require_coprime(p, q);
  const double qd = static_cast<double>(q);
  std::vector<double> out(static_cast<std::size_t>(ell));
  if (q % 2 == 1) {
    if (ell != q) throw DomainError("odd q tabulates over l = q");
    std::fill(out.begin(), out.end(), 1.0 / qd);
  } else if ((q / 2) % 2 == 1) {
    if (ell != q) throw DomainError("q = 2 mod 4 tabulates over l = q");
    for (std::int64_t k = 0; k < ell; ++k) out[k] = k % 2 == 1 ? 2.0 / qd : 0.0;
  } else if (ell == q / 2) {
    std::fill(out.begin(), out.end(), 2.0 / qd);
  } else if (ell == q) {
    for (std::int64_t k = 0; k < ell; ++k) out[k] = k % 2 == 0 ? 2.0 / qd : 0.0;
  } else {
    throw DomainError("q divisible by 4 tabulates over l = q/2 or l = q");
  }
  return out;
}

std::string gauss_table_csv(const RevivalCoefficients& c, double tolerance) {
  const auto expected = modulus_law(c.p, c.q, c.ell);
  std::ostringstream os;
  os << "k,re_b,im_b,modulus_squared,expected,pass\n";
  for (std::int64_t k = 0; k < c.ell; ++k) {
    const double m = std::norm(c.b[k]);
    os << k << ',' << format_real(c.b[k].real()) << ',' << format_real(c.b[k].imag()) << ','
       << format_real(m) << ',' << format_real(expected[k]) << ','
       << (std::abs(m - expected[k]) <= tolerance ? "pass" : "fail") << '\n';
  }
  return os.str();
}

}  // namespace revivalkit
