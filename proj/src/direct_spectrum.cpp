#include "revivalkit/direct_spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "revivalkit/errors.hpp"
#include "revivalkit/format.hpp"

namespace revivalkit {

namespace {

constexpr double kTruncationMargin = 1.0;
// Default step as a fraction of the resolution limit. Calibrated so halving
// the step moves window eigenvalues by well under 1e-3 h/|ln h|.
constexpr double kNumerovStepFraction = 0.5;
constexpr double kSecondOrderStepFraction = 0.1;

}  // namespace

double resolution_limit(const Potential& v, double h) {
  const double vmin = v.grid_minimum();
  return h / (10.0 * std::sqrt(2.0 * (h - vmin)));
}

double default_grid_step(const Potential& v, double h, Stencil stencil) {
  const double f = stencil == Stencil::kNumerov ? kNumerovStepFraction : kSecondOrderStepFraction;
  return f * resolution_limit(v, h);
}

DiscretizedOperator::DiscretizedOperator(const Potential& v, double h, double halfwidth,
                                         double step, Stencil stencil)
    : h_(h), halfwidth_(halfwidth), stencil_(stencil), even_(v.is_even()) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("h must lie in (0, 1)");
  if (!(halfwidth > 0.0)) throw DomainError("grid half-width must be positive");
  if (!(step > 0.0) || step > resolution_limit(v, h) * (1.0 + 1e-12))
    throw ResolutionError("grid step " + format_real(step) + " exceeds the resolution limit " +
                          format_real(resolution_limit(v, h)));
  if (!(v(halfwidth) > h + kTruncationMargin && v(-halfwidth) > h + kTruncationMargin))
    throw TruncationError("V(+-L) must exceed h + " + format_real(kTruncationMargin));
  auto intervals = static_cast<std::size_t>(std::ceil(2.0 * halfwidth / step));
  if (even_ && intervals % 2 == 1) ++intervals;
  step_ = 2.0 * halfwidth / static_cast<double>(intervals);
  potential_samples_.resize(intervals - 1);
  for (std::size_t j = 0; j + 1 < intervals; ++j) potential_samples_[j] = v(position(j));
  if (stencil_ == Stencil::kNumerov) {
    const double vmax = *std::max_element(potential_samples_.begin(), potential_samples_.end());
    const double g = step_ * step_ * (vmax + h) / (6.0 * h * h);
    if (g >= 0.5) throw ResolutionError("Numerov stencil unstable near the grid ends");
  }
}

Tridiagonal DiscretizedOperator::matrix_at(double energy) const {
  const std::size_t n = size();
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n > 0 ? n - 1 : 0, 0.0);
  if (stencil_ == Stencil::kSecondOrder) {
    const double kin = h_ * h_ / (step_ * step_);
    for (std::size_t j = 0; j < n; ++j) t.diag[j] = kin + potential_samples_[j] - energy;
    std::fill(t.off.begin(), t.off.end(), -0.5 * kin);
  } else {
    const double c = step_ * step_ / (6.0 * h_ * h_);
    for (std::size_t j = 0; j < n; ++j) {
      const double g = c * (potential_samples_[j] - energy);
      t.diag[j] = 2.0 * (1.0 + 5.0 * g) / (1.0 - g);
    }
    std::fill(t.off.begin(), t.off.end(), -1.0);
  }
  return t;
}

std::size_t DiscretizedOperator::count_below(double energy, Parity parity) const {
  if (parity != Parity::kNone && !even_)
    throw DomainError("parity blocks need an even potential");
  const std::size_t n = size();
  // Pivots of the LDL^T factorization over nodes [first, n). The even block
  // folds psi(-dx) = psi(dx) into the first coupling, doubling its square.
  std::size_t first = 0;
  double first_coupling = 1.0;
  if (parity == Parity::kEven) {
    first = center_node();
    first_coupling = 2.0;
  } else if (parity == Parity::kOdd) {
    first = center_node() + 1;
  }
  double diag_shift = 0.0, off2 = 1.0, c = 0.0;
  if (stencil_ == Stencil::kSecondOrder) {
    const double kin = h_ * h_ / (step_ * step_);
    diag_shift = kin;
    off2 = 0.25 * kin * kin;
  } else {
    c = step_ * step_ / (6.0 * h_ * h_);
  }
  std::size_t count = 0;
  double q = 1.0;
  constexpr double tiny = std::numeric_limits<double>::min();
  for (std::size_t j = first; j < n; ++j) {
    double d;
    if (stencil_ == Stencil::kSecondOrder) {
      d = diag_shift + potential_samples_[j] - energy;
    } else {
      const double g = c * (potential_samples_[j] - energy);
      d = 2.0 * (1.0 + 5.0 * g) / (1.0 - g);
    }
    if (j > first) d -= (j == first + 1 ? first_coupling : 1.0) * off2 / q;
    q = d;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

DiscretizedOperator discretize(const Potential& v, double h, double halfwidth, double step,
                               Stencil stencil) {
  return DiscretizedOperator(v, h, halfwidth, step, stencil);
}

double default_halfwidth(const Potential& v, double h) {
  const double cap = v.domain_halfwidth();
  const double dx = 1e-4;
  double width = 0.0;
  for (double s : {1.0, -1.0}) {
    double x = 0.0;
    while (x < cap && v(s * x) < h) x += dx;
    double decay = 0.0;
    while (x < cap && (v(s * x) < h + 2.0 * kTruncationMargin || decay < 60.0)) {
      decay += std::sqrt(2.0 * std::max(0.0, v(s * x) - h)) / h * dx;
      x += dx;
    }
    width = std::max(width, x);
  }
  return std::min(cap, width);
}

DiscretizedOperator discretize(const Potential& v, double h) {
  return DiscretizedOperator(v, h, default_halfwidth(v, h), default_grid_step(v, h),
                             Stencil::kNumerov);
}

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::kEven: return "even";
    case Parity::kOdd: return "odd";
    default: return "n/a";
  }
}

std::vector<double> WindowedSpectrum::eigenvalues() const {
  std::vector<double> out;
  for (const auto& l : levels) out.push_back(l.eigenvalue);
  return out;
}

namespace {

// Null vector of the (nearly singular) matrix at an eigenvalue, solved on
// the parity block and reflected back onto the full grid.
std::vector<double> inverse_iteration(const DiscretizedOperator& op, double energy, Parity parity) {
  const std::size_t n = op.size();
  const std::size_t first = parity == Parity::kNone  ? 0
                            : parity == Parity::kEven ? op.center_node()
                                                      : op.center_node() + 1;
  const std::size_t m = n - first;
  std::vector<double> y(m);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& v : y) v = uni(rng);
  for (int it = 0; it < 3; ++it) {
    const Tridiagonal t = op.matrix_at(energy);
    std::vector<double> diag(t.diag.begin() + first, t.diag.end());
    std::vector<double> lower(t.off.begin() + first, t.off.end());
    std::vector<double> upper = lower;
    if (parity == Parity::kEven && m > 1) upper[0] *= 2.0;
    const lapack_int info =
        LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), 1, lower.data(), diag.data(),
                      upper.data(), y.data(), static_cast<lapack_int>(m));
    if (info < 0) throw SolverFailure("tridiagonal solve rejected its arguments");
    if (info > 0) {
      // Exactly singular: perturb the shift by one ulp and retry.
      energy = std::nextafter(energy, energy + 1.0);
      continue;
    }
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw SolverFailure("inverse iteration diverged");
    for (double& v : y) v /= norm;
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    x[first + k] = y[k];
    if (parity != Parity::kNone) {
      const std::size_t mirror = 2 * op.center_node() - (first + k);
      if (mirror != first + k) x[mirror] = parity == Parity::kEven ? y[k] : -y[k];
    }
  }
  if (op.stencil() == Stencil::kNumerov) {
    const double c = op.step() * op.step() / (6.0 * op.h() * op.h());
    for (std::size_t j = 0; j < n; ++j) x[j] /= 1.0 - c * (op.potential_samples()[j] - energy);
  }
  double norm = 0.0;
  for (double v : x) norm += v * v * op.step();
  norm = std::sqrt(norm);
  for (double& v : x) v /= norm;
  return x;
}

}  // namespace

WindowedSpectrum slice_spectrum(const DiscretizedOperator& op, double lower, double upper,
                                std::size_t max_samples) {
  if (!(lower < upper)) throw DomainError("empty energy slice");
  WindowedSpectrum out;
  out.h = op.h();
  out.lower = lower;
  out.upper = upper;
  const double tolerance = 1e-11 * std::max(op.h(), std::abs(upper - lower));
  const std::size_t n = op.size();
  const std::size_t stride =
      max_samples == 0 ? n : std::max<std::size_t>(1, (n + max_samples - 1) / max_samples);
  if (max_samples > 0)
    for (std::size_t j = 0; j < n; j += stride) out.sample_positions.push_back(op.position(j));

  const std::vector<Parity> blocks = op.symmetric_potential()
                                         ? std::vector<Parity>{Parity::kEven, Parity::kOdd}
                                         : std::vector<Parity>{Parity::kNone};
  struct Found {
    double energy;
    Parity block;
  };
  std::vector<Found> found;
  std::size_t below = 0;
  for (Parity block : blocks) {
    std::map<double, std::size_t> counts;
    auto count = [&](double e) {
      auto it = counts.find(e);
      if (it != counts.end()) return it->second;
      return counts[e] = op.count_below(e, block);
    };
    const std::size_t first = count(lower);
    const std::size_t end = count(upper);
    below += first;
    for (std::size_t i = first; i < end; ++i) {
      // Tightest known bracket with count(lo) <= i < count(hi).
      double lo = lower, hi = upper;
      for (const auto& [e, c] : counts) {
        if (c <= i) lo = std::max(lo, e);
        if (c > i) hi = std::min(hi, e);
      }
      while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count(mid) > i)
          hi = mid;
        else
          lo = mid;
      }
      found.push_back({0.5 * (lo + hi), block});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.energy < b.energy; });

  for (std::size_t i = 0; i < found.size(); ++i) {
    const double e = found[i].energy;
    const std::vector<double> psi = inverse_iteration(op, e, found[i].block);
    double overlap = 0.0;
    for (std::size_t j = 0; j < n; ++j) overlap += psi[j] * psi[n - 1 - j] * op.step();
    Parity parity = Parity::kNone;
    if (op.symmetric_potential()) parity = overlap > 0.0 ? Parity::kEven : Parity::kOdd;
    out.levels.push_back({below + i, e, parity, overlap});
    if (max_samples > 0) {
      std::vector<double> samples;
      for (std::size_t j = 0; j < n; j += stride) samples.push_back(psi[j]);
      out.sample_values.push_back(std::move(samples));
    }
  }
  return out;
}

WindowedSpectrum window_spectrum(const DiscretizedOperator& op) {
  return slice_spectrum(op, -op.h(), op.h());
}

std::string direct_spectrum_csv(const WindowedSpectrum& w) {
  std::ostringstream os;
  os << "family,index,lambda,eigenvalue,gap_to_next,parity\n";
  for (std::size_t j = 0; j < w.levels.size(); ++j) {
    const auto& l = w.levels[j];
    os << "n/a," << l.index << ',' << format_real(l.eigenvalue / w.h) << ','
       << format_real(l.eigenvalue) << ',';
    if (j + 1 < w.levels.size()) os << format_real(w.levels[j + 1].eigenvalue - l.eigenvalue);
    os << ',' << parity_name(l.parity) << '\n';
  }
  return os.str();
}

}  // namespace revivalkit
