#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "revivalkit/jet.hpp"
#include "revivalkit/potential.hpp"

namespace revivalkit {

enum class Family { kAlpha, kBeta };

const char* family_name(Family f);

struct ModelOptions {
  double delta = 0.1;
  // First-order action correction S1+ = S1- (a Maslov-type constant).
  double subprincipal_action = -M_PI / 2.0;
  int action_nodes = 48;
  int monotonicity_samples = 401;
};

// Phases of the quantization functions at one point. f, y, z are reduced by
// 2 pi * offset_turns() so they stay O(|ln h|) instead of O(1/h).
struct ModelPhases {
  Jet f;
  Jet g;
  Jet y;
  Jet z;
  double arccos_argument;
};

class SpectralModel {
 public:
  SpectralModel(Potential v, double h, ModelOptions options = {});
  SpectralModel(Potential v, std::shared_ptr<const ActionTable> actions, double h,
                ModelOptions options = {});

  const Potential& potential() const { return potential_; }
  const ActionTable& actions() const { return *actions_; }
  std::shared_ptr<const ActionTable> shared_actions() const { return actions_; }
  const ModelOptions& options() const { return options_; }
  double h() const { return h_; }
  double delta() const { return actions_->delta(); }
  double omega() const { return omega_; }
  // Largest |lambda| for which the action tables are valid.
  double lambda_limit() const { return delta() / h_; }

  double epsilon(double energy) const { return energy / omega_; }
  // theta+-(E) = S+-(E)/h including the first-order correction
  double theta(int sign, double energy) const;

  std::int64_t offset_turns() const { return offset_turns_; }
  ModelPhases phases(double lambda) const;

 private:
  Potential potential_;
  std::shared_ptr<const ActionTable> actions_;
  ModelOptions options_;
  double h_;
  double omega_;
  double log_h_;
  std::int64_t offset_turns_ = 0;
  double mean_offset_ = 0.0;  // reduced constant part of f
  double half_difference_offset_ = 0.0;  // reduced constant part of g
};

// Spectral functions on lambda in [-1, 1]; f, Y, Z are returned unreduced.
double f_h(const SpectralModel& m, double lambda);
double g_h(const SpectralModel& m, double lambda);
double Y_h(const SpectralModel& m, double lambda);
double Z_h(const SpectralModel& m, double lambda);
double derivatives_Y(const SpectralModel& m, double lambda, int order);
double derivatives_Z(const SpectralModel& m, double lambda, int order);

// Derivatives of the inverse function A = Y^{-1} at Y(lambda).
struct InverseDerivatives {
  double first;
  double second;
  double third;
};
InverseDerivatives inverse_derivatives(const Jet& forward);

struct Level {
  std::int64_t index;
  double lambda;
  double eigenvalue;  // h * lambda
  double residual;    // family function minus 2 pi index
  InverseDerivatives inverse;
};

struct IndexRange {
  std::int64_t first = 0;
  std::int64_t last = -1;
  std::int64_t size() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::int64_t k) const { return k >= first && k <= last; }
};

struct SpectrumWindow {
  double h = 0.0;
  std::vector<Level> alphas;  // ascending eigenvalue, descending index
  std::vector<Level> betas;
  IndexRange alpha_indices;   // I_h
  IndexRange beta_indices;    // J_h

  const std::vector<Level>& family(Family f) const { return f == Family::kAlpha ? alphas : betas; }
  std::size_t count() const { return alphas.size() + betas.size(); }
  // Merged ascending eigenvalues of both families.
  std::vector<double> merged() const;
};

SpectrumWindow solve_families(const SpectralModel& m);

// Levels of one family with consecutive indices [first, last], solved on the
// extended range |lambda| <= lambda_limit(). Ordered by index.
std::vector<Level> solve_ladder(const SpectralModel& m, Family f, std::int64_t first,
                                std::int64_t last);

// Spectrum CSV: family, index, lambda, eigenvalue, gap_to_next.
std::string spectrum_csv(const SpectrumWindow& w);

}  // namespace revivalkit
