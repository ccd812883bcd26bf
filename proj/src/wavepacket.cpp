#include "revivalkit/wavepacket.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "revivalkit/errors.hpp"
#include "revivalkit/format.hpp"

namespace revivalkit {

ProfileShape ProfileShape::gaussian() {
  return custom(
      "gaussian", [](double x) { return std::exp(-0.5 * x * x); },
      [](double xi) { return std::sqrt(M_PI) * std::exp(-M_PI * M_PI * xi * xi); },
      std::numeric_limits<double>::infinity());
}

ProfileShape ProfileShape::bump() {
  return custom(
      "bump", [](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; },
      std::nullopt, 1.0);
}

ProfileShape ProfileShape::custom(std::string name, Fn chi, std::optional<Fn> fourier_of_square,
                                  double support_radius) {
  ProfileShape p;
  p.name_ = std::move(name);
  p.chi_ = std::move(chi);
  p.fourier_ = std::move(fourier_of_square);
  p.support_ = support_radius;
  return p;
}

ProfileShape profile_by_name(const std::string& name) {
  if (name == "gaussian") return ProfileShape::gaussian();
  if (name == "bump") return ProfileShape::bump();
  throw ProfileError("unknown profile '" + name + "' (expected gaussian or bump)");
}

double ProfileShape::fourier_of_square(double xi) const {
  if (!fourier_) throw ProfileError("no Fourier data known for profile " + name_);
  return (*fourier_)(xi);
}

double ProfileShape::square_integral() const {
  if (fourier_) return (*fourier_)(0.0);
  boost::math::quadrature::tanh_sinh<double> q;
  auto sq = [this](double x) { return chi_(x) * chi_(x); };
  if (std::isfinite(support_)) return q.integrate(sq, -support_, support_);
  boost::math::quadrature::tanh_sinh<double> q2;
  return 2.0 * q2.integrate([&](double t) { return sq(t / (1.0 - t)) / ((1.0 - t) * (1.0 - t)); },
                            0.0, 1.0);
}

void ProfileShape::validate() const {
  if (!(chi_(0.0) > 0.0)) throw ProfileError("chi(0) must be positive for " + name_);
  for (int j = 1; j <= 400; ++j) {
    const double x = 0.025 * j;
    const double a = chi_(x), b = chi_(-x);
    if (!(a >= 0.0 && b >= 0.0)) throw ProfileError("chi must be non-negative for " + name_);
    if (std::abs(a - b) > 1e-14 * std::max(1.0, std::abs(a)))
      throw ProfileError("chi must be even for " + name_);
  }
}

void validate(const PacketSpec& s) {
  if (!(s.h > 0.0 && s.h < 1.0)) throw ParameterError("0 < h < 1 required");
  if (!(s.E >= -1.0 && s.E <= 1.0)) throw ParameterError("E in [-1, 1] required");
  if (!(s.gamma_prime >= 0.0 && s.gamma_prime < 1.0))
    throw ParameterError("0 <= gamma' < 1 required for the localization width");
  if (!(s.gamma < 1.0)) throw ParameterError("gamma < 1 required for the split sets");
  if (!(s.gamma + s.gamma_prime > 1.0))
    throw ParameterError("gamma + gamma' > 1 required for the split sets");
  if (s.revival_scale && !(s.gamma < 1.0 / 3.0))
    throw ParameterError("gamma < 1/3 required for revival-scale time windows");
  if (!(s.truncation_factor > 0.0)) throw ParameterError("truncation factor must be positive");
  s.chi.validate();
}

double localization_width(const PacketSpec& s) {
  return std::pow(std::abs(std::log(s.h)), 1.0 - s.gamma_prime);
}

double CoefficientSequence::at(std::int64_t n) const {
  if (n < first() || n > last()) return 0.0;
  return values[static_cast<std::size_t>(n - first())];
}

Centers select_centers(const SpectrumWindow& w, double E) {
  if (!(E >= -1.0 && E <= 1.0)) throw DomainError("E must lie in [-1, 1]");
  auto nearest = [&](const std::vector<Level>& levels, const char* name) {
    if (levels.empty()) throw EmptyWindow(std::string("no ") + name + " levels in the window");
    const Level* best = nullptr;
    double best_d = 0.0;
    for (const auto& l : levels) {
      const double d = std::abs(l.eigenvalue - w.h * E);
      if (!best || d < best_d || (d == best_d && l.index < best->index)) {
        best = &l;
        best_d = d;
      }
    }
    return best->index;
  };
  return {nearest(w.alphas, "alpha"), nearest(w.betas, "beta")};
}

CoefficientSequence build_coefficients(const PacketSpec& spec, std::int64_t center, Family family) {
  validate(spec);
  CoefficientSequence c;
  c.family = family;
  c.center = center;
  c.width = localization_width(spec);
  double reach = spec.truncation_factor * c.width;
  if (std::isfinite(spec.chi.support_radius()))
    reach = std::min(reach, spec.chi.support_radius() * c.width);
  c.radius = static_cast<std::int64_t>(std::ceil(reach));
  c.values.resize(static_cast<std::size_t>(2 * c.radius + 1));
  for (std::int64_t j = -c.radius; j <= c.radius; ++j)
    c.values[static_cast<std::size_t>(j + c.radius)] = spec.chi(static_cast<double>(j) / c.width);
  // Sum squares from the tails inward to keep the small terms.
  double sum = 0.0;
  for (std::int64_t j = c.radius; j >= 1; --j) {
    const double a = c.values[static_cast<std::size_t>(c.radius + j)];
    const double b = c.values[static_cast<std::size_t>(c.radius - j)];
    sum += a * a + b * b;
  }
  sum += c.values[static_cast<std::size_t>(c.radius)] * c.values[static_cast<std::size_t>(c.radius)];
  for (std::int64_t j = c.radius + 1; j < c.radius + 200; ++j) {
    const double v = spec.chi(static_cast<double>(j) / c.width);
    c.dropped_tail += 2.0 * v * v;
  }
  c.normalization = 1.0 / std::sqrt(sum);
  c.closed_form_normalization = 1.0 / std::sqrt(spec.chi.square_integral() * c.width);
  for (double& v : c.values) v *= c.normalization;
  return c;
}

SplitSets split_sets(const PacketSpec& spec, std::int64_t center) {
  const CoefficientSequence c = build_coefficients(spec, center);
  const auto half = static_cast<std::int64_t>(std::floor(std::pow(std::abs(std::log(spec.h)), spec.gamma)));
  SplitSets s{center - half, center + half, 0.0};
  for (std::int64_t n = c.first(); n <= c.last(); ++n)
    if (n < s.first || n > s.last) s.gamma_mass += c.at(n) * c.at(n);
  s.gamma_mass += c.dropped_tail * c.normalization * c.normalization;
  return s;
}

std::string coefficients_csv(const CoefficientSequence& c) {
  std::ostringstream os;
  os << "index,offset,a_n,a_n_squared\n";
  for (std::int64_t n = c.first(); n <= c.last(); ++n) {
    const double a = c.at(n);
    os << n << ',' << (n - c.center) << ',' << format_real(a) << ',' << format_real(a * a) << '\n';
  }
  return os.str();
}

}  // namespace revivalkit
