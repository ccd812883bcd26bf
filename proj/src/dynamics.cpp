#include "revivalkit/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "revivalkit/errors.hpp"
#include "revivalkit/fit.hpp"
#include "revivalkit/format.hpp"

namespace revivalkit {

namespace {

using cplx = std::complex<double>;

std::int64_t mod(__int128 a, std::int64_t m) {
  const __int128 r = a % m;
  return static_cast<std::int64_t>(r < 0 ? r + m : r);
}

cplx unit(std::int64_t num, std::int64_t den) {
  return std::polar(1.0, -2.0 * M_PI * static_cast<double>(num) / static_cast<double>(den));
}

void check_window(const std::vector<double>& times, double limit, const char* what) {
  for (double t : times) {
    if (t < 0.0) throw TimeScaleError(std::string(what) + " time grid must start at t >= 0");
    if (t > limit * (1.0 + 1e-12))
      throw TimeScaleError(std::string(what) + " time grid reaches t = " + format_real(t) +
                           " beyond its validity limit " + format_real(limit));
  }
}

double max_time(const std::vector<double>& times) {
  return times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
}

void fill_periods(PhaseData& p) {
  p.T_hyp = 1.0 / p.A1;
  p.T_rev = 1.0 / (M_PI * p.A2);
  double ratio = p.T_rev / p.T_hyp;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, std::abs(ratio))) ratio = nearest;
  p.N_h = static_cast<std::int64_t>(std::floor(ratio));
  p.frac = ratio - static_cast<double>(p.N_h);
}

}  // namespace

double default_alpha(double gamma) { return std::min(2.0, 3.0 - 2.0 * gamma - 0.1); }
// Midpoint of (3, 4 - 3 gamma), capped at 3.5.
double default_beta(double gamma) { return std::min(3.5, 3.5 - 1.5 * gamma); }

PhaseData PhaseData::from_derivatives(double a0, double a1, double a2, std::int64_t center) {
  if (a1 == 0.0 || a2 == 0.0) throw DomainError("A1 and A2 must be non-zero");
  PhaseData p;
  p.center = center;
  p.A0 = a0;
  p.A1 = a1;
  p.A2 = a2;
  fill_periods(p);
  return p;
}

PhaseData PhaseData::from_periods(double a0, double t_hyp, double t_rev, std::int64_t center) {
  if (t_hyp == 0.0 || t_rev == 0.0) throw DomainError("periods must be non-zero");
  PhaseData p;
  p.center = center;
  p.A0 = a0;
  p.A1 = 1.0 / t_hyp;
  p.A2 = 1.0 / (M_PI * t_rev);
  p.T_hyp = t_hyp;
  p.T_rev = t_rev;
  double ratio = t_rev / t_hyp;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, std::abs(ratio))) ratio = nearest;
  p.N_h = static_cast<std::int64_t>(std::floor(ratio));
  p.frac = ratio - static_cast<double>(p.N_h);
  return p;
}

PhaseData phase_data(const SpectralModel& m, const SpectrumWindow& w, Family f, std::int64_t center) {
  const Level level = solve_ladder(m, f, center, center).front();
  PhaseData p = PhaseData::from_derivatives(level.lambda, level.inverse.first, level.inverse.second,
                                            center);
  p.h = m.h();
  p.A3bound = std::abs(level.inverse.third);
  for (const auto& l : w.family(f)) p.A3bound = std::max(p.A3bound, std::abs(l.inverse.third));
  const ModelPhases ph = m.phases(level.lambda);
  p.curvature = (f == Family::kAlpha ? ph.y : ph.z).derivative(2);
  return p;
}

void set_time_windows(PhaseData& p, double gamma, double alpha, double beta) {
  if (!(p.h > 0.0)) throw ParameterError("time windows need the semiclassical parameter h");
  if (!(alpha > 1.0 && alpha < 3.0 - 2.0 * gamma))
    throw ParameterError("alpha in (1, 3 - 2 gamma) required for the order-1 window");
  const double log_h = std::abs(std::log(p.h));
  p.gamma = gamma;
  p.order1_limit = std::pow(log_h, alpha);
  if (beta > 3.0 && beta < 4.0 - 3.0 * gamma) {
    p.order2_limit = std::pow(log_h, beta);
  } else {
    // No admissible beta: the order-2 window collapses onto the order-1 one.
    p.order2_limit = p.order1_limit;
  }
}

FamilyComponent model_component(const SpectralModel& m, const CoefficientSequence& c, double weight) {
  FamilyComponent out{c.family, c, {}, weight};
  for (const Level& l : solve_ladder(m, c.family, c.first(), c.last())) out.lambdas.push_back(l.lambda);
  return out;
}

FamilyComponent direct_component(const WindowedSpectrum& slice, Parity parity, double E,
                                 const CoefficientSequence& c, Family family, double weight) {
  std::vector<double> levels;
  for (const auto& l : slice.levels)
    if (l.parity == parity) levels.push_back(l.eigenvalue);
  if (levels.empty()) throw SupportError(std::string("no ") + parity_name(parity) + " levels");
  std::size_t centre = 0;
  for (std::size_t j = 1; j < levels.size(); ++j)
    if (std::abs(levels[j] - slice.h * E) < std::abs(levels[centre] - slice.h * E)) centre = j;
  FamilyComponent out{family, c, {}, weight};
  out.coefficients.family = family;
  for (std::int64_t n = c.first(); n <= c.last(); ++n) {
    const std::int64_t pos = static_cast<std::int64_t>(centre) - (n - c.center);
    if (pos < 0 || pos >= static_cast<std::int64_t>(levels.size()))
      throw SupportError("packet support escapes the direct spectrum slice");
    out.lambdas.push_back(levels[static_cast<std::size_t>(pos)] / slice.h);
  }
  return out;
}

namespace {

Series sum_components(const PacketState& state, const std::vector<double>& times, double carrier,
                      const Family* only) {
  Series out(times.size(), 0.0);
  for (const auto& part : state) {
    if (only && part.family != *only) continue;
    const auto& c = part.coefficients;
    if (part.lambdas.size() != c.values.size())
      throw SupportError("packet support is not covered by the spectrum");
    for (std::size_t i = 0; i < times.size(); ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < c.values.size(); ++j)
        s += c.weight(j) * std::polar(1.0, -times[i] * (part.lambdas[j] - carrier));
      out[i] += part.weight * s;
    }
  }
  return out;
}

}  // namespace

Series exact_return(const PacketState& state, const std::vector<double>& times, double carrier) {
  return sum_components(state, times, carrier, nullptr);
}

Series partial_autocorrelation(const PacketState& state, Family f, const std::vector<double>& times,
                               double carrier) {
  return sum_components(state, times, carrier, &f);
}

Series order1(const CoefficientSequence& c, const PhaseData& p, const std::vector<double>& times) {
  check_window(times, p.order1_limit, "order-1");
  return order1_shifted(c, p, times, 0, 1);
}

Series order1_shifted(const CoefficientSequence& c, const PhaseData& p,
                      const std::vector<double>& times, std::int64_t shift_num,
                      std::int64_t shift_den) {
  if (shift_den <= 0) throw DomainError("shift denominator must be positive");
  Series out(times.size());
  const std::int64_t r = c.radius;
  for (std::size_t i = 0; i < times.size(); ++i) {
    // exp(-2 pi i t A1 d) by recurrence in d, times the exact shift phase.
    const double theta = 2.0 * M_PI * times[i] * p.A1;
    const cplx step = std::polar(1.0, -theta);
    cplx z = std::polar(1.0, theta * static_cast<double>(r));
    cplx s = 0.0;
    for (std::int64_t d = -r; d <= r; ++d) {
      const double w = c.weight(static_cast<std::size_t>(d + r));
      const cplx shift = shift_num == 0 ? cplx(1.0)
                                        : unit(mod(static_cast<__int128>(shift_num) * d, shift_den),
                                               shift_den);
      s += w * z * shift;
      z *= step;
    }
    out[i] = s;
  }
  return out;
}

Series order2(const CoefficientSequence& c, const PhaseData& p, const std::vector<double>& times) {
  if (max_time(times) > p.order1_limit * (1.0 + 1e-12) && !(p.gamma < 1.0 / 3.0) &&
      !std::isnan(p.gamma))
    throw ParameterError("gamma < 1/3 required for revival-scale time grids");
  check_window(times, p.order2_limit, "order-2");
  return order2_at_revival_fraction(c, p, times, 0, 1);
}

Series order2_at_revival_fraction(const CoefficientSequence& c, const PhaseData& p,
                                  const std::vector<double>& times, std::int64_t num,
                                  std::int64_t den) {
  if (den <= 0) throw DomainError("fraction denominator must be positive");
  // tau = (num/den) N_h T_hyp. tau A1 2 pi d = 2 pi (num N_h d / den) and
  // tau A2 2 pi^2 d^2 = 2 pi (num/den) d^2 N_h / (N_h + frac).
  const double squeeze = p.N_h == 0 && p.frac == 0.0
                             ? 0.0
                             : p.frac / (static_cast<double>(p.N_h) + p.frac);
  const std::int64_t r = c.radius;
  std::vector<cplx> shift(static_cast<std::size_t>(2 * r + 1));
  for (std::int64_t d = -r; d <= r; ++d) {
    const std::int64_t lin = mod(static_cast<__int128>(num) * p.N_h * d, den);
    const std::int64_t quad = mod(static_cast<__int128>(num) * d * d, den);
    const double small = -2.0 * M_PI * static_cast<double>(num) / static_cast<double>(den) *
                         static_cast<double>(d) * static_cast<double>(d) * squeeze;
    shift[static_cast<std::size_t>(d + r)] =
        unit(mod(static_cast<__int128>(lin) + quad, den), den) * std::polar(1.0, -small);
  }
  Series out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    cplx s = 0.0;
    for (std::int64_t d = -r; d <= r; ++d) {
      const double dd = static_cast<double>(d);
      const double phase = t * (p.A1 * 2.0 * M_PI * dd + p.A2 * 2.0 * M_PI * M_PI * dd * dd);
      s += c.weight(static_cast<std::size_t>(d + r)) * std::polar(1.0, -phase) *
           shift[static_cast<std::size_t>(d + r)];
    }
    out[i] = s;
  }
  return out;
}

Series with_carrier(const Series& s, const std::vector<double>& times, double a0) {
  Series out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * std::polar(1.0, -times[i] * a0);
  return out;
}

std::vector<double> order1_closed_form(const CoefficientSequence& c, const ProfileShape& chi,
                                       const PhaseData& p, const std::vector<double>& times,
                                       int images) {
  if (!chi.has_fourier())
    throw ProfileError("closed form needs Fourier data of chi^2 for profile " + chi.name());
  const double L = c.width;
  const double period = std::abs(p.T_hyp);
  auto image_sum = [&](double d) {
    double s = chi.fourier_of_square(L * d);
    if (images == 0) return s;
    for (int m = 1; images < 0 || m <= images; ++m) {
      const double a = chi.fourier_of_square(L * (d + m));
      const double b = chi.fourier_of_square(L * (d - m));
      s += a + b;
      if (images < 0 && a + b < 1e-18 * s) break;
      if (m > 100000) break;
    }
    return s;
  };
  const double norm = image_sum(0.0);
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = times[i] / period;
    const double d = std::abs(s - std::round(s));  // d(t, T_hyp Z) / |T_hyp|
    out[i] = image_sum(d) / norm;
  }
  return out;
}

FractionalPrediction fractional_prediction(const CoefficientSequence& c, const PhaseData& p,
                                           std::int64_t num, std::int64_t den,
                                           const std::vector<double>& times) {
  check_window(times, p.order1_limit, "fractional prediction");
  FractionalPrediction out;
  out.coefficients = coefficients(num, den, p.center);
  const std::int64_t ell = out.coefficients.ell;
  out.clones.assign(times.size(), 0.0);
  for (std::int64_t k = 0; k < ell; ++k) {
    // k/l + num N_h / den = (k den + num N_h l) / (l den)
    const std::int64_t shift_den = ell * den;
    const std::int64_t shift_num =
        mod(static_cast<__int128>(k) * den + static_cast<__int128>(num) * p.N_h * ell, shift_den);
    const Series part = order1_shifted(c, p, times, shift_num, shift_den);
    for (std::size_t i = 0; i < times.size(); ++i) {
      // t is shifted by T_hyp * s: exp(-2 pi i (t / T_hyp + s) d) with the
      // sign of T_hyp folded into A1.
      out.clones[i] += out.coefficients.b_tilde[static_cast<std::size_t>(k)] * part[i];
    }
  }
  out.revival = order2_at_revival_fraction(c, p, times, num, den);
  for (std::size_t i = 0; i < times.size(); ++i)
    out.sup_difference = std::max(out.sup_difference, std::abs(out.revival[i] - out.clones[i]));
  return out;
}

PeakReport detect_peaks(const std::vector<double>& times, const std::vector<double>& values,
                        double threshold) {
  if (times.size() != values.size()) throw DomainError("times and values differ in length");
  PeakReport r;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double a = values[i - 1], b = values[i], c = values[i + 1];
    if (!(b > a && b >= c && b >= threshold)) continue;
    const double denom = a - 2.0 * b + c;
    double offset = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    const double dt = 0.5 * (times[i + 1] - times[i - 1]);
    r.times.push_back(times[i] + offset * dt);
    r.heights.push_back(b - 0.25 * (a - c) * offset);
  }
  if (r.times.empty()) throw NoPeaks("no interior maxima above " + format_real(threshold));
  if (r.times.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < r.times.size(); ++i) gaps.push_back(r.times[i] - r.times[i - 1]);
    r.period = median(gaps);
  }
  return r;
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (points < 2) throw DomainError("a time grid needs at least two points");
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  return t;
}

std::vector<double> hyperbolic_grid(const PhaseData& p, double t_max, double per_period) {
  const auto n = static_cast<std::size_t>(std::ceil(t_max / std::abs(p.T_hyp) * per_period)) + 1;
  return uniform_grid(t_max, std::max<std::size_t>(n, 2));
}

std::vector<double> revival_grid(const PhaseData& p, double span, double per_period,
                                 std::size_t cap) {
  const double t_max = span * std::abs(p.T_rev);
  auto n = static_cast<std::size_t>(std::ceil(t_max / std::abs(p.T_hyp) * per_period)) + 1;
  return uniform_grid(t_max, std::clamp<std::size_t>(n, 2, cap));
}

std::vector<double> modulus(const Series& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::abs(s[i]);
  return out;
}

}  // namespace revivalkit
