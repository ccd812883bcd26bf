#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "revivalkit/direct_spectrum.hpp"
#include "revivalkit/gauss.hpp"
#include "revivalkit/model_spectrum.hpp"
#include "revivalkit/wavepacket.hpp"

namespace revivalkit {

using Series = std::vector<std::complex<double>>;

double default_alpha(double gamma);  // min(2, 3 - 2 gamma - 0.1)
double default_beta(double gamma);   // min(3.5, 3.5 - 1.5 gamma)

// Taylor data of the inverse quantization function at 2 pi n0. Periods keep
// their sign; grids and distances use magnitudes.
struct PhaseData {
  std::int64_t center = 0;
  double A0 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3bound = 0.0;
  double T_hyp = 0.0;
  double T_rev = 0.0;
  std::int64_t N_h = 0;
  double frac = 0.0;
  double curvature = std::numeric_limits<double>::quiet_NaN();  // (Y'' o A)(2 pi n0)
  double h = std::numeric_limits<double>::quiet_NaN();          // NaN when synthetic
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double order1_limit = std::numeric_limits<double>::infinity();
  double order2_limit = std::numeric_limits<double>::infinity();

  static PhaseData from_derivatives(double a0, double a1, double a2, std::int64_t center = 0);
  // Exact periods; a ratio within 1e-12 of an integer is snapped to it.
  static PhaseData from_periods(double a0, double t_hyp, double t_rev, std::int64_t center = 0);
};

PhaseData phase_data(const SpectralModel& m, const SpectrumWindow& w, Family f, std::int64_t center);

// order1 valid up to |ln h|^alpha, order2 up to |ln h|^beta. Needs phase.h.
void set_time_windows(PhaseData& phase, double gamma, double alpha, double beta);

// Q2(X) = A0 + A1 2 pi (X - n0) + A2 2 pi^2 (X - n0)^2
struct QuadraticPhase {
  double A0, A1, A2;
  std::int64_t center;
  explicit QuadraticPhase(const PhaseData& p) : A0(p.A0), A1(p.A1), A2(p.A2), center(p.center) {}
  double operator()(double n) const {
    const double d = n - static_cast<double>(center);
    return A0 + A1 * 2.0 * M_PI * d + A2 * 2.0 * M_PI * M_PI * d * d;
  }
};

// One family's share of the initial state: coefficients, the matching
// rescaled eigenvalues lambda_n = E_n / h, and a mixing weight.
struct FamilyComponent {
  Family family;
  CoefficientSequence coefficients;
  std::vector<double> lambdas;
  double weight = 1.0;
};
using PacketState = std::vector<FamilyComponent>;

FamilyComponent model_component(const SpectralModel& m, const CoefficientSequence& c,
                                double weight = 1.0);
// Levels of one parity class from a direct slice, centred on the level
// closest to h E; offset +j maps to the j-th lower level.
FamilyComponent direct_component(const WindowedSpectrum& slice, Parity parity, double E,
                                 const CoefficientSequence& c, Family family, double weight = 1.0);

// r(t) exp(i t carrier); the carrier removes a common fast phase.
Series exact_return(const PacketState& state, const std::vector<double>& times, double carrier = 0.0);
Series partial_autocorrelation(const PacketState& state, Family f, const std::vector<double>& times,
                               double carrier = 0.0);

Series order1(const CoefficientSequence& c, const PhaseData& p, const std::vector<double>& times);
Series order2(const CoefficientSequence& c, const PhaseData& p, const std::vector<double>& times);
// Multiplies by exp(-i t A0), giving a1 from a1~ and a2 from a2~.
Series with_carrier(const Series& s, const std::vector<double>& times, double a0);

// F(chi^2)(L d) / F(chi^2)(0) summed over the Poisson images d + m, |m| <= images.
// images = 0 keeps the nearest image only; images < 0 sums until terms
// drop below 1e-18.
std::vector<double> order1_closed_form(const CoefficientSequence& c, const ProfileShape& chi,
                                       const PhaseData& p, const std::vector<double>& times,
                                       int images = -1);

struct FractionalPrediction {
  RevivalCoefficients coefficients;
  Series clones;   // sum_k b~_k a1~(t + T_hyp (k/l + p N_h / q))
  Series revival;  // a2~(t + (p/q) N_h T_hyp)
  double sup_difference = 0.0;
};

FractionalPrediction fractional_prediction(const CoefficientSequence& c, const PhaseData& p,
                                           std::int64_t num, std::int64_t den,
                                           const std::vector<double>& times);

// a1~ and a2~ at t + T_hyp * shift with the shift's phase reduced exactly.
// shift = (integer numerator) / (integer denominator).
Series order1_shifted(const CoefficientSequence& c, const PhaseData& p,
                      const std::vector<double>& times, std::int64_t shift_num,
                      std::int64_t shift_den);
// a2~(t + (num/den) N_h T_hyp) with the rational parts of the phase reduced exactly.
Series order2_at_revival_fraction(const CoefficientSequence& c, const PhaseData& p,
                                  const std::vector<double>& times, std::int64_t num,
                                  std::int64_t den);

struct PeakReport {
  std::vector<double> times;
  std::vector<double> heights;
  double period = std::numeric_limits<double>::quiet_NaN();  // median spacing
};

// Interior local maxima at or above threshold, refined by a parabola.
PeakReport detect_peaks(const std::vector<double>& times, const std::vector<double>& values,
                        double threshold);

std::vector<double> uniform_grid(double t_max, std::size_t points);
// 64 samples per |T_hyp| up to t_max.
std::vector<double> hyperbolic_grid(const PhaseData& p, double t_max, double per_period = 64.0);
// 16 samples per |T_hyp| across [0, 1.2 |T_rev|], at most 2e6 samples.
std::vector<double> revival_grid(const PhaseData& p, double span = 1.2, double per_period = 16.0,
                                 std::size_t cap = 2000000);

std::vector<double> modulus(const Series& s);

}  // namespace revivalkit
