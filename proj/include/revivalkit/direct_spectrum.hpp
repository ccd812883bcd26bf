#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "revivalkit/potential.hpp"

namespace revivalkit {

enum class Stencil { kSecondOrder, kNumerov };

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

enum class Parity { kEven, kOdd, kNone };
const char* parity_name(Parity p);

// Finite-difference discretization of -(h^2/2) d^2/dx^2 + V on [-L, L] with
// Dirichlet ends. The Numerov stencil yields an energy-dependent symmetric
// tridiagonal pencil J(E); the second-order stencil a fixed matrix H.
// For an even potential the grid has a node at x = 0 and splits into even
// (Neumann at 0) and odd (Dirichlet at 0) half-line blocks.
class DiscretizedOperator {
 public:
  DiscretizedOperator(const Potential& v, double h, double halfwidth, double step, Stencil stencil);

  double h() const { return h_; }
  double halfwidth() const { return halfwidth_; }
  double step() const { return step_; }
  Stencil stencil() const { return stencil_; }
  std::size_t size() const { return potential_samples_.size(); }
  double position(std::size_t j) const { return -halfwidth_ + step_ * static_cast<double>(j + 1); }
  bool symmetric_potential() const { return even_; }
  const std::vector<double>& potential_samples() const { return potential_samples_; }

  // Second order: H itself. Numerov: J(E), singular exactly at eigenvalues.
  Tridiagonal matrix_at(double energy) const;
  // Number of eigenvalues strictly below the given energy, optionally
  // restricted to one parity block (even potentials only).
  std::size_t count_below(double energy, Parity parity = Parity::kNone) const;
  // Index of the node at x = 0 (even potentials only).
  std::size_t center_node() const { return size() / 2; }

 private:
  double h_;
  double halfwidth_;
  double step_;
  Stencil stencil_;
  bool even_;
  std::vector<double> potential_samples_;
};

// Largest step allowed by the resolution rule dx <= h / (10 sqrt(2 (h - min V))).
double resolution_limit(const Potential& v, double h);
// Default step: a fixed fraction of the resolution limit.
double default_grid_step(const Potential& v, double h, Stencil stencil = Stencil::kNumerov);
// Smallest symmetric half-width beyond which states at energies <= h are
// negligible: V exceeds h + 2 and the WKB decay exponent past the outer
// turning point reaches 60. Capped at the potential's own half-width.
double default_halfwidth(const Potential& v, double h);

DiscretizedOperator discretize(const Potential& v, double h, double halfwidth, double step,
                               Stencil stencil = Stencil::kNumerov);
DiscretizedOperator discretize(const Potential& v, double h);

struct DirectLevel {
  std::size_t index;   // position in the full spectrum, counted from 0
  double eigenvalue;
  Parity parity;
  double reflection_overlap;  // <psi(x), psi(-x)> for a unit-norm psi
};

struct WindowedSpectrum {
  double h = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<DirectLevel> levels;
  // Eigenvector samples on a decimated grid, one row per level.
  std::vector<double> sample_positions;
  std::vector<std::vector<double>> sample_values;

  std::vector<double> eigenvalues() const;
};

// Eigenvalues in [lower, upper] by Sturm-count bisection, eigenvectors by
// inverse iteration, both per parity block when the potential is even.
// max_samples = 0 keeps no eigenvector samples.
WindowedSpectrum slice_spectrum(const DiscretizedOperator& op, double lower, double upper,
                                std::size_t max_samples = 2001);
WindowedSpectrum window_spectrum(const DiscretizedOperator& op);

// Same schema as the model CSV plus a parity column. Families are n/a here.
std::string direct_spectrum_csv(const WindowedSpectrum& w);

}  // namespace revivalkit
