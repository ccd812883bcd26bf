#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "revivalkit/model_spectrum.hpp"

namespace revivalkit {

// Localization profile chi. Fourier data of chi^2 is optional; the closed
// forms in the dynamics module need it.
class ProfileShape {
 public:
  using Fn = std::function<double(double)>;

  static ProfileShape gaussian();
  // exp(-1 / (1 - x^2)) on |x| < 1
  static ProfileShape bump();
  static ProfileShape custom(std::string name, Fn chi, std::optional<Fn> fourier_of_square,
                             double support_radius);

  const std::string& name() const { return name_; }
  double operator()(double x) const { return chi_(x); }
  bool has_fourier() const { return fourier_.has_value(); }
  // F(chi^2)(xi) with F(f)(xi) = int f(x) exp(-2 pi i x xi) dx
  double fourier_of_square(double xi) const;
  // F(chi^2)(0), numerically when no closed form is known
  double square_integral() const;
  // |x| beyond which chi vanishes (infinity for the Gaussian)
  double support_radius() const { return support_; }
  // chi(0) > 0, chi even and non-negative on a sample grid
  void validate() const;

 private:
  std::string name_;
  Fn chi_;
  std::optional<Fn> fourier_;
  double support_ = 0.0;
};

ProfileShape profile_by_name(const std::string& name);

struct PacketSpec {
  double E = 0.0;
  double gamma_prime = 0.2;
  double gamma = 0.9;
  ProfileShape chi = ProfileShape::gaussian();
  double h = 1e-3;
  double truncation_factor = 10.0;
  bool revival_scale = false;
};

// Throws ParameterError naming the violated constraint.
void validate(const PacketSpec& spec);

double localization_width(const PacketSpec& spec);  // |ln h|^(1 - gamma')

struct CoefficientSequence {
  Family family = Family::kAlpha;
  std::int64_t center = 0;
  std::int64_t radius = 0;
  double width = 0.0;
  std::vector<double> values;  // a_n for n = center - radius ... center + radius
  double normalization = 0.0;  // K_h from exact summation
  double closed_form_normalization = 0.0;
  double dropped_tail = 0.0;   // un-normalized chi^2 mass beyond the radius

  std::int64_t first() const { return center - radius; }
  std::int64_t last() const { return center + radius; }
  double at(std::int64_t n) const;
  double weight(std::size_t j) const { return values[j] * values[j]; }
};

struct Centers {
  std::int64_t n0;
  std::int64_t m0;
};

Centers select_centers(const SpectrumWindow& w, double E);

CoefficientSequence build_coefficients(const PacketSpec& spec, std::int64_t center,
                                       Family family = Family::kAlpha);

struct SplitSets {
  std::int64_t first;  // Delta = [first, last]
  std::int64_t last;
  std::int64_t size() const { return last - first + 1; }
  double gamma_mass;   // packet mass outside Delta
};

SplitSets split_sets(const PacketSpec& spec, std::int64_t center);

// Coefficient CSV: index, n - n0, a_n, |a_n|^2.
std::string coefficients_csv(const CoefficientSequence& c);

}  // namespace revivalkit
