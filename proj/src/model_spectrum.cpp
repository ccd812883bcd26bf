#include "revivalkit/model_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revivalkit/errors.hpp"
#include "revivalkit/format.hpp"
#include "revivalkit/special.hpp"

namespace revivalkit {

const char* family_name(Family f) { return f == Family::kAlpha ? "alpha" : "beta"; }

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

// x - 2 pi round(x / 2 pi), returning the number of turns removed.
double reduce_turns(long double x, std::int64_t* turns) {
  const long double k = std::round(x / kTwoPiL);
  if (turns) *turns = static_cast<std::int64_t>(k);
  return static_cast<double>(x - k * kTwoPiL);
}

// Jet in lambda of D(lambda h), given the jet of D in E at E = lambda h.
Jet rescale(Jet e_jet, double h) {
  double s = 1.0;
  for (double& c : e_jet.c) {
    c *= s;
    s *= h;
  }
  return e_jet;
}

Jet arg_gamma_jet(const Jet& y) {
  using cplx = std::complex<double>;
  const cplx z(0.5, y.value());
  const double g0 = log_gamma(z).imag();
  const double g1 = polygamma(0, z).real();
  const double g2 = -polygamma(1, z).imag();
  const double g3 = -polygamma(2, z).real();
  return compose(y, g0, g1, g2, g3);
}

}  // namespace

SpectralModel::SpectralModel(Potential v, double h, ModelOptions options)
    : SpectralModel(v, std::make_shared<ActionTable>(v, options.delta, options.action_nodes), h,
                    options) {}

SpectralModel::SpectralModel(Potential v, std::shared_ptr<const ActionTable> actions, double h,
                             ModelOptions options)
    : potential_(std::move(v)), actions_(std::move(actions)), options_(options), h_(h) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("h must lie in (0, 1)");
  omega_ = potential_.omega();
  log_h_ = std::log(h);
  if (!(h_ <= actions_->delta())) throw DomainError("window [-h, h] exceeds delta");
  const long double s_mean =
      0.5L * (static_cast<long double>(actions_->action_at_zero(+1)) + actions_->action_at_zero(-1));
  const long double constant =
      -s_mean / h_ - static_cast<long double>(options_.subprincipal_action) + M_PI / 2.0;
  mean_offset_ = reduce_turns(constant, &offset_turns_);
  const long double half_diff =
      0.5L * (static_cast<long double>(actions_->action_at_zero(+1)) - actions_->action_at_zero(-1)) /
      h_;
  half_difference_offset_ = reduce_turns(half_diff, nullptr);
}

double SpectralModel::theta(int sign, double energy) const {
  return actions_->action(sign, energy) / h_ + options_.subprincipal_action;
}

ModelPhases SpectralModel::phases(double lambda) const {
  if (!(std::abs(lambda) <= lambda_limit()))
    throw DomainError("lambda outside the action table range |lambda h| <= delta");
  const Jet x = Jet::variable(lambda);
  const double e = lambda * h_;
  const Jet dp = rescale(actions_->increment_jet(+1, e), h_);
  const Jet dm = actions_->symmetric() ? dp : rescale(actions_->increment_jet(-1, e), h_);

  ModelPhases out;
  const Jet y_arg = (1.0 / omega_) * x;  // epsilon(lambda h)/h with leading epsilon
  out.f = Jet::constant(mean_offset_) - x * (0.5 * (dp + dm)) + (log_h_ / omega_) * x +
          arg_gamma_jet(y_arg);
  out.g = actions_->symmetric() ? Jet{} : Jet::constant(half_difference_offset_) + x * (0.5 * (dp - dm));

  const Jet a = (2.0 * M_PI) * y_arg;  // 2 pi epsilon / h
  Jet phi;
  const double a0 = a.value();
  if (out.g.is_zero()) {
    // cos g = 1, sin g = 0: arccos(1/sqrt(1 + e^a)) = atan2(e^{a/2}, 1)
    phi = a0 <= 0.0 ? atan2(exp(0.5 * a), Jet::constant(1.0))
                    : atan2(Jet::constant(1.0), exp(-0.5 * a));
    out.arccos_argument = a0 <= 0.0 ? 1.0 / std::sqrt(1.0 + std::exp(a0))
                                    : std::exp(-0.5 * a0) / std::sqrt(1.0 + std::exp(-a0));
  } else {
    const Jet cg = cos(out.g);
    const Jet sg = sin(out.g);
    if (a0 <= 0.0) {
      phi = atan2(sqrt(sg * sg + exp(a)), cg);
      out.arccos_argument = cg.value() / std::sqrt(1.0 + std::exp(a0));
    } else {
      const Jet ea = exp(-a);
      phi = atan2(sqrt(sg * sg * ea + Jet::constant(1.0)), cg * exp(-0.5 * a));
      out.arccos_argument = cg.value() * std::exp(-0.5 * a0) / std::sqrt(1.0 + std::exp(-a0));
    }
  }
  if (std::abs(out.arccos_argument) > 1.0 + 1e-12)
    throw NumericalError("arccos argument outside [-1, 1]");
  out.y = out.f - phi;
  out.z = out.f + phi;
  return out;
}

namespace {

void check_window(double lambda) {
  if (!(lambda >= -1.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [-1, 1]");
}

double unreduce(const SpectralModel& m, double reduced) {
  return static_cast<double>(kTwoPiL * m.offset_turns() + reduced);
}

}  // namespace

double f_h(const SpectralModel& m, double lambda) {
  check_window(lambda);
  return unreduce(m, m.phases(lambda).f.value());
}

double g_h(const SpectralModel& m, double lambda) {
  check_window(lambda);
  const double e = lambda * m.h();
  return 0.5 * (m.actions().action(+1, e) - m.actions().action(-1, e)) / m.h();
}

double Y_h(const SpectralModel& m, double lambda) {
  check_window(lambda);
  return unreduce(m, m.phases(lambda).y.value());
}

double Z_h(const SpectralModel& m, double lambda) {
  check_window(lambda);
  return unreduce(m, m.phases(lambda).z.value());
}

double derivatives_Y(const SpectralModel& m, double lambda, int order) {
  check_window(lambda);
  if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
  return m.phases(lambda).y.derivative(order);
}

double derivatives_Z(const SpectralModel& m, double lambda, int order) {
  check_window(lambda);
  if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
  return m.phases(lambda).z.derivative(order);
}

InverseDerivatives inverse_derivatives(const Jet& forward) {
  const double y1 = forward.derivative(1);
  const double y2 = forward.derivative(2);
  const double y3 = forward.derivative(3);
  return {1.0 / y1, -y2 / (y1 * y1 * y1),
          -y3 / (y1 * y1 * y1 * y1) + 3.0 * y2 * y2 / (y1 * y1 * y1 * y1 * y1)};
}

std::vector<double> SpectrumWindow::merged() const {
  std::vector<double> out;
  for (const auto& l : alphas) out.push_back(l.eigenvalue);
  for (const auto& l : betas) out.push_back(l.eigenvalue);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const Jet& pick(const ModelPhases& p, Family f) { return f == Family::kAlpha ? p.y : p.z; }

// Bisection for the reduced family function equal to target on [lo, hi].
Level solve_level(const SpectralModel& m, Family f, std::int64_t index, double lo, double hi) {
  const double target = 2.0 * M_PI * static_cast<double>(index - m.offset_turns());
  auto value = [&](double x) { return pick(m.phases(x), f).value() - target; };
  double flo = value(lo);
  const double fhi = value(hi);
  if (flo == 0.0) hi = lo;
  if (fhi == 0.0) lo = hi;
  if (lo != hi && (flo > 0.0) == (fhi > 0.0))
    throw RootBracketError(std::string("no sign change for ") + family_name(f) + " index " +
                           std::to_string(index));
  while (lo != hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = value(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double root = std::abs(value(lo)) <= std::abs(value(hi)) ? lo : hi;
  const ModelPhases p = m.phases(root);
  const Jet& j = pick(p, f);
  return {index, root, root * m.h(), j.value() - target, inverse_derivatives(j)};
}

IndexRange enumerate(double reduced_a, double reduced_b, std::int64_t offset) {
  const double lo = std::min(reduced_a, reduced_b), hi = std::max(reduced_a, reduced_b);
  IndexRange r;
  r.first = offset + static_cast<std::int64_t>(std::ceil(lo / (2.0 * M_PI)));
  r.last = offset + static_cast<std::int64_t>(std::floor(hi / (2.0 * M_PI)));
  return r;
}

}  // namespace

SpectrumWindow solve_families(const SpectralModel& m) {
  const int n = std::max(3, m.options().monotonicity_samples);
  std::vector<double> ys(n), zs(n);
  for (int j = 0; j < n; ++j) {
    const ModelPhases p = m.phases(-1.0 + 2.0 * j / (n - 1));
    ys[j] = p.y.value();
    zs[j] = p.z.value();
  }
  auto monotone = [](const std::vector<double>& v) {
    bool dec = true, inc = true;
    for (std::size_t j = 1; j < v.size(); ++j) {
      dec = dec && v[j] < v[j - 1];
      inc = inc && v[j] > v[j - 1];
    }
    return dec || inc;
  };
  if (!monotone(ys)) throw MonotonicityError("sampled Y_h is not strictly monotone on [-1, 1]");
  if (!monotone(zs)) throw MonotonicityError("sampled Z_h is not strictly monotone on [-1, 1]");

  SpectrumWindow w;
  w.h = m.h();
  w.alpha_indices = enumerate(ys.front(), ys.back(), m.offset_turns());
  w.beta_indices = enumerate(zs.front(), zs.back(), m.offset_turns());
  for (std::int64_t k = w.alpha_indices.first; k <= w.alpha_indices.last; ++k)
    w.alphas.push_back(solve_level(m, Family::kAlpha, k, -1.0, 1.0));
  for (std::int64_t k = w.beta_indices.first; k <= w.beta_indices.last; ++k)
    w.betas.push_back(solve_level(m, Family::kBeta, k, -1.0, 1.0));
  auto by_value = [](const Level& a, const Level& b) { return a.eigenvalue < b.eigenvalue; };
  std::sort(w.alphas.begin(), w.alphas.end(), by_value);
  std::sort(w.betas.begin(), w.betas.end(), by_value);
  return w;
}

std::vector<Level> solve_ladder(const SpectralModel& m, Family f, std::int64_t first,
                                std::int64_t last) {
  const double limit = m.lambda_limit();
  std::vector<Level> out;
  const double at_lo = pick(m.phases(-limit), f).value();
  const double at_hi = pick(m.phases(limit), f).value();
  for (std::int64_t k = first; k <= last; ++k) {
    const double target = 2.0 * M_PI * static_cast<double>(k - m.offset_turns());
    if ((at_lo - target > 0.0) == (at_hi - target > 0.0))
      throw SupportError(std::string(family_name(f)) + " index " + std::to_string(k) +
                         " has no level with |lambda h| <= delta");
    out.push_back(solve_level(m, f, k, -limit, limit));
  }
  return out;
}

std::string spectrum_csv(const SpectrumWindow& w) {
  std::ostringstream os;
  os << "family,index,lambda,eigenvalue,gap_to_next\n";
  for (Family f : {Family::kAlpha, Family::kBeta}) {
    const auto& levels = w.family(f);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      os << family_name(f) << ',' << levels[j].index << ',' << format_real(levels[j].lambda) << ','
         << format_real(levels[j].eigenvalue) << ',';
      if (j + 1 < levels.size()) os << format_real(levels[j + 1].eigenvalue - levels[j].eigenvalue);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace revivalkit
