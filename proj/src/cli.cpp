#include "revivalkit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "revivalkit/direct_spectrum.hpp"
#include "revivalkit/dynamics.hpp"
#include "revivalkit/errors.hpp"
#include "revivalkit/fit.hpp"
#include "revivalkit/format.hpp"
#include "revivalkit/gauss.hpp"
#include "revivalkit/model_spectrum.hpp"
#include "revivalkit/potential.hpp"
#include "revivalkit/wavepacket.hpp"

namespace revivalkit {

namespace fs = std::filesystem;
using nlohmann::json;

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kModel: return "model";
    case Backend::kDirect: return "direct";
    case Backend::kBoth: return "both";
  }
  return "model";
}

Backend backend_by_name(const std::string& name) {
  if (name == "model") return Backend::kModel;
  if (name == "direct") return Backend::kDirect;
  if (name == "both") return Backend::kBoth;
  throw ConfigError("unknown backend '" + name + "' (expected model, direct or both)");
}

// Hyperbolic-scale runs use (gamma', gamma) = (0.2, 0.9); revival-scale runs
// need gamma < 1/3 and use (0.8, 0.3).
double RunConfig::resolved_gamma() const { return gamma.value_or(revival_regime() ? 0.3 : 0.9); }
double RunConfig::resolved_gamma_prime() const {
  return gamma_prime.value_or(revival_regime() ? 0.8 : 0.2);
}
double RunConfig::resolved_alpha() const { return alpha.value_or(default_alpha(resolved_gamma())); }
double RunConfig::resolved_beta() const { return beta.value_or(default_beta(resolved_gamma())); }

std::vector<std::pair<std::int64_t, std::int64_t>> RunConfig::fractions() const {
  if (p.size() != q.size() && p.size() != 1 && q.size() != 1)
    throw ConfigError("--p and --q lists must have equal length or one entry");
  const std::size_t n = std::max(p.size(), q.size());
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t i = 0; i < n; ++i)
    out.emplace_back(p[p.size() == 1 ? 0 : i], q[q.size() == 1 ? 0 : i]);
  return out;
}

std::string default_output_directory() {
  const char* env = std::getenv("REVIVALKIT_OUT");
  return env && *env ? std::string(env) : std::string("revivalkit_out");
}

namespace {

template <typename T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

const json* find_key(const json& j, const std::string& flag) {
  std::string underscored = flag;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  for (const auto& key : {flag, underscored}) {
    auto it = j.find(key);
    if (it != j.end()) return &*it;
  }
  return nullptr;
}

}  // namespace

void apply_config(const json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> known = {
      "command", "potential", "h", "E", "gamma", "gamma-prime", "alpha", "beta", "chi",
      "periods", "revival-span", "p", "q", "out", "backend", "jobs"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    std::replace(key.begin(), key.end(), '_', '-');
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown configuration key '" + it.key() + "'");
  }
  try {
    if (auto v = find_key(j, "command")) c.command = v->get<std::string>();
    if (auto v = find_key(j, "potential")) c.potential = v->get<std::string>();
    if (auto v = find_key(j, "h")) c.h = as_list<double>(*v);
    if (auto v = find_key(j, "E")) c.E = v->get<double>();
    if (auto v = find_key(j, "gamma")) c.gamma = v->get<double>();
    if (auto v = find_key(j, "gamma-prime")) c.gamma_prime = v->get<double>();
    if (auto v = find_key(j, "alpha")) c.alpha = v->get<double>();
    if (auto v = find_key(j, "beta")) c.beta = v->get<double>();
    if (auto v = find_key(j, "chi")) c.chi = v->get<std::string>();
    if (auto v = find_key(j, "periods")) c.periods = v->get<double>();
    if (auto v = find_key(j, "revival-span")) c.revival_span = v->get<double>();
    if (auto v = find_key(j, "p")) c.p = as_list<std::int64_t>(*v);
    if (auto v = find_key(j, "q")) c.q = as_list<std::int64_t>(*v);
    if (auto v = find_key(j, "out")) c.out = v->get<std::string>();
    if (auto v = find_key(j, "backend")) c.backend = backend_by_name(v->get<std::string>());
    if (auto v = find_key(j, "jobs")) c.jobs = v->get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  apply_config(j, base);
  return base;
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"spectrum", "packet", "evolve",
                                                    "revival",  "gauss",  "sweep"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw ConfigError("unknown subcommand '" + c.command + "'");
  if (c.potential != "double-well")
    throw ConfigError("unknown potential '" + c.potential + "' (expected double-well)");
  if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (c.out.empty()) throw ConfigError("--out must not be empty");
  if (c.command == "gauss") {
    for (auto [p, q] : c.fractions()) {
      if (q < 1) throw DomainError("q >= 1 required");
      if (std::gcd(p, q) != 1) throw NotCoprime("gcd(p, q) = 1 required");
    }
    return;
  }
  if (c.h.empty()) throw ConfigError("--h needs at least one value");
  for (double h : c.h)
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("0 < h < 1 required, got h = " + format_real(h));
  if (!(c.E >= -1.0 && c.E <= 1.0)) throw ParameterError("E in [-1, 1] required");
  profile_by_name(c.chi);
  const double g = c.resolved_gamma();
  const double gp = c.resolved_gamma_prime();
  PacketSpec spec;
  spec.gamma = g;
  spec.gamma_prime = gp;
  spec.revival_scale = c.revival_regime();
  validate(spec);
  const double alpha = c.resolved_alpha();
  if (!(alpha > 1.0 && alpha < 3.0 - 2.0 * g))
    throw ParameterError("alpha in (1, 3 - 2 gamma) required for the order-1 window");
  if (c.revival_regime()) {
    const double beta = c.resolved_beta();
    if (!(beta > 3.0 && beta < 4.0 - 3.0 * g))
      throw ParameterError("beta in (3, 4 - 3 gamma) required for the order-2 window");
    if (!(c.revival_span > 0.0)) throw ConfigError("--revival-span must be positive");
    for (auto [p, q] : c.fractions()) {
      if (q < 1) throw DomainError("q >= 1 required");
      if (std::gcd(p, q) != 1) throw NotCoprime("gcd(p, q) = 1 required");
    }
  }
  if (c.command == "evolve" && c.periods && !(*c.periods > 0.0)) throw ConfigError("--periods must be positive");
}

int exit_code_for(const std::exception& e) {
  if (auto err = dynamic_cast<const Error*>(&e))
    return err->category() == ErrorCategory::kConfig ? 2 : 3;
  if (dynamic_cast<const json::exception*>(&e)) return 2;
  return 3;
}

namespace {

std::string h_label(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h_%.6g", h);
  return buf;
}

class Writer {
 public:
  explicit Writer(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  void write(const std::string& relative, const std::string& content) {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    std::lock_guard lock(mutex_);
    files_.push_back(relative);
  }

  std::vector<std::string> files() const {
    auto f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }

 private:
  fs::path root_;
  std::mutex mutex_;
  std::vector<std::string> files_;
};

// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// exception in index order.
template <typename Body>
void parallel_for(std::size_t n, int jobs, Body body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"max_abs_residual", f.max_abs_residual},
          {"max_rel_residual", f.max_rel_residual}};
}

// Everything one h value needs on the model side.
struct Setup {
  double h;
  PacketSpec spec;
  std::unique_ptr<SpectralModel> model;
  SpectrumWindow window;
  Centers centers{};
  CoefficientSequence alpha_packet;
  PhaseData phase;
};

// Without packet_support the phase data comes from the window levels alone,
// which keeps sweeps usable at h where the packet outgrows the action table.
Setup make_setup(const RunConfig& c, double h, const std::shared_ptr<const ActionTable>& table,
                 bool packet_support = true) {
  Setup s;
  s.h = h;
  s.spec.E = c.E;
  s.spec.gamma = c.resolved_gamma();
  s.spec.gamma_prime = c.resolved_gamma_prime();
  s.spec.chi = profile_by_name(c.chi);
  s.spec.h = h;
  s.spec.revival_scale = c.revival_regime();
  s.model = std::make_unique<SpectralModel>(canonical_double_well(), table, h);
  s.window = solve_families(*s.model);
  s.centers = select_centers(s.window, c.E);
  s.alpha_packet = build_coefficients(s.spec, s.centers.n0, Family::kAlpha);
  SpectrumWindow support = s.window;
  if (packet_support)
    support.alphas = solve_ladder(*s.model, Family::kAlpha, s.alpha_packet.first(),
                                  s.alpha_packet.last());
  s.phase = phase_data(*s.model, support, Family::kAlpha, s.centers.n0);
  set_time_windows(s.phase, s.spec.gamma, c.resolved_alpha(), c.resolved_beta());
  return s;
}

json phase_json(const PhaseData& p) {
  return {{"n0", p.center},
          {"A0", p.A0},
          {"A1", p.A1},
          {"A2", p.A2},
          {"A3_bound", p.A3bound},
          {"T_hyp", p.T_hyp},
          {"T_rev", p.T_rev},
          {"N_h", p.N_h},
          {"fractional_part", p.frac},
          {"curvature", p.curvature},
          {"order1_limit", p.order1_limit},
          {"order2_limit", p.order2_limit}};
}

std::string num(double x) { return format_real(x); }

struct SeriesColumns {
  std::vector<double> t;
  double t_hyp = 1.0;
  std::vector<double> exact, partial, a1, a2, closed;
};

std::string series_csv(const SeriesColumns& s) {
  std::ostringstream os;
  os << "t,t_over_T_hyp,c_exact,abs_a,abs_a1,abs_a2,closed_form\n";
  auto at = [](const std::vector<double>& v, std::size_t i) {
    return v.empty() ? std::string("nan") : num(v[i]);
  };
  for (std::size_t i = 0; i < s.t.size(); ++i)
    os << num(s.t[i]) << ',' << num(s.t[i] / std::abs(s.t_hyp)) << ',' << at(s.exact, i) << ','
       << at(s.partial, i) << ',' << at(s.a1, i) << ',' << at(s.a2, i) << ',' << at(s.closed, i)
       << '\n';
  return os.str();
}

// Grid points inside [0, limit], the rest left as NaN.
std::vector<double> masked(const std::vector<double>& t, double limit,
                           const std::function<Series(const std::vector<double>&)>& eval) {
  std::vector<double> inside;
  for (double x : t)
    if (x <= limit) inside.push_back(x);
  std::vector<double> out(t.size(), std::numeric_limits<double>::quiet_NaN());
  if (inside.empty()) return out;
  const auto m = modulus(eval(inside));
  std::copy(m.begin(), m.end(), out.begin());
  return out;
}

FamilyComponent direct_alpha(const Setup& s) {
  const auto op = discretize(s.model->potential(), s.h);
  // Widen the slice until it covers the packet support on both sides.
  const double gap = 2.0 * M_PI * s.h / std::abs(s.phase.T_hyp);
  const double span = (static_cast<double>(s.alpha_packet.radius) + 4.0) * 2.0 * gap;
  const double centre = s.h * s.spec.E;
  const auto slice = slice_spectrum(op, centre - span, centre + span, 0);
  if (!s.model->potential().is_even())
    throw ConfigError("the direct backend splits families by parity and needs an even potential");
  return direct_component(slice, Parity::kEven, s.spec.E, s.alpha_packet, Family::kAlpha);
}

struct Context {
  const RunConfig& config;
  Writer& writer;
  std::shared_ptr<const ActionTable> table;
};

json run_spectrum(Context& ctx, std::string& summary) {
  const auto& c = ctx.config;
  std::vector<json> rows(c.h.size());
  parallel_for(c.h.size(), c.jobs, [&](std::size_t i) {
    const double h = c.h[i];
    const std::string dir = h_label(h) + "/";
    json row = {{"h", h}};
    if (c.backend != Backend::kDirect) {
      SpectralModel m(canonical_double_well(), ctx.table, h);
      const auto w = solve_families(m);
      ctx.writer.write(dir + "spectrum_model.csv", spectrum_csv(w));
      std::vector<double> gaps;
      const auto merged = w.merged();
      for (std::size_t k = 1; k < merged.size(); ++k) gaps.push_back(merged[k] - merged[k - 1]);
      row["model"] = {{"alpha_count", w.alphas.size()},
                      {"beta_count", w.betas.size()},
                      {"I_h", {w.alpha_indices.first, w.alpha_indices.last}},
                      {"J_h", {w.beta_indices.first, w.beta_indices.last}},
                      {"mean_gap", gaps.empty() ? 0.0 : std::accumulate(gaps.begin(), gaps.end(), 0.0) /
                                                            static_cast<double>(gaps.size())}};
    }
    if (c.backend != Backend::kModel) {
      const auto op = discretize(canonical_double_well(), h);
      const auto w = window_spectrum(op);
      ctx.writer.write(dir + "spectrum_direct.csv", direct_spectrum_csv(w));
      const auto ev = w.eigenvalues();
      double mean_gap = 0.0;
      if (ev.size() > 1) mean_gap = (ev.back() - ev.front()) / static_cast<double>(ev.size() - 1);
      row["direct"] = {{"count", ev.size()},
                       {"halfwidth", op.halfwidth()},
                       {"grid_step", op.step()},
                       {"mean_gap", mean_gap}};
    }
    rows[i] = row;
  });
  json out = json::array();
  for (auto& r : rows) {
    std::ostringstream line;
    line << "h=" << num(r["h"].get<double>());
    if (r.contains("model"))
      line << " model: " << r["model"]["alpha_count"] << " alpha + " << r["model"]["beta_count"]
           << " beta";
    if (r.contains("direct")) line << " direct: " << r["direct"]["count"] << " levels";
    summary += line.str() + "\n";
    out.push_back(std::move(r));
  }
  return {{"points", out}};
}

json run_packet(Context& ctx, std::string& summary) {
  const auto& c = ctx.config;
  std::vector<json> rows(c.h.size());
  parallel_for(c.h.size(), c.jobs, [&](std::size_t i) {
    const double h = c.h[i];
    const Setup s = make_setup(c, h, ctx.table);
    const auto beta_packet = build_coefficients(s.spec, s.centers.m0, Family::kBeta);
    const auto split = split_sets(s.spec, s.centers.n0);
    const std::string dir = h_label(h) + "/";
    ctx.writer.write(dir + "coefficients_alpha.csv", coefficients_csv(s.alpha_packet));
    ctx.writer.write(dir + "coefficients_beta.csv", coefficients_csv(beta_packet));
    const auto& a = s.alpha_packet;
    rows[i] = {{"h", h},
               {"n0", s.centers.n0},
               {"m0", s.centers.m0},
               {"radius", a.radius},
               {"localization_width", a.width},
               {"K_h", a.normalization},
               {"K_h_closed_form", a.closed_form_normalization},
               {"K_h_relative_error",
                std::abs(a.normalization - a.closed_form_normalization) / a.closed_form_normalization},
               {"dropped_tail", a.dropped_tail},
               {"delta", {split.first, split.last}},
               {"delta_size", split.size()},
               {"gamma_mass", split.gamma_mass},
               {"delta_inside_I_h", s.window.alpha_indices.contains(split.first) &&
                                        s.window.alpha_indices.contains(split.last)}};
  });
  json out = json::array();
  for (auto& r : rows) {
    summary += "h=" + num(r["h"].get<double>()) + " n0=" + std::to_string(r["n0"].get<std::int64_t>()) +
               " m0=" + std::to_string(r["m0"].get<std::int64_t>()) +
               " K_h=" + num(r["K_h"].get<double>()) + "\n";
    out.push_back(std::move(r));
  }
  return {{"points", out}};
}

json run_evolve(Context& ctx, std::string& summary, bool revival) {
  const auto& c = ctx.config;
  std::vector<json> rows(c.h.size());
  parallel_for(c.h.size(), c.jobs, [&](std::size_t i) {
    const double h = c.h[i];
    const Setup s = make_setup(c, h, ctx.table);
    const auto& p = s.phase;
    const std::string dir = h_label(h) + "/";
    std::vector<double> t;
    if (revival) {
      if (c.revival_span * std::abs(p.T_rev) > p.order2_limit)
        throw TimeScaleError("revival grid reaches " + num(c.revival_span * std::abs(p.T_rev)) +
                             " beyond the order-2 limit " + num(p.order2_limit));
      t = revival_grid(p, c.revival_span);
    } else {
      t = hyperbolic_grid(p, c.periods ? *c.periods * std::abs(p.T_hyp) : p.order1_limit);
      if (t.back() > p.order1_limit)
        throw TimeScaleError("time grid reaches t = " + num(t.back()) +
                             " beyond the order-1 limit |ln h|^alpha = " + num(p.order1_limit));
    }
    json row = {{"h", h}, {"phase", phase_json(p)}, {"samples", t.size()}};
    std::vector<std::pair<std::string, FamilyComponent>> backends;
    if (c.backend != Backend::kDirect)
      backends.emplace_back("model", model_component(*s.model, s.alpha_packet));
    if (c.backend != Backend::kModel) backends.emplace_back("direct", direct_alpha(s));
    const auto& a = s.alpha_packet;
    const auto chi = profile_by_name(c.chi);
    for (const auto& [name, component] : backends) {
      SeriesColumns cols;
      cols.t = t;
      cols.t_hyp = p.T_hyp;
      PacketState state{component};
      cols.exact = modulus(exact_return(state, t));
      cols.partial = modulus(partial_autocorrelation(state, Family::kAlpha, t));
      cols.a1 = masked(t, p.order1_limit, [&](const auto& x) { return order1(a, p, x); });
      cols.a2 = modulus(order2(a, p, t));
      if (chi.has_fourier()) cols.closed = order1_closed_form(a, chi, p, t);
      ctx.writer.write(dir + "series_" + name + ".csv", series_csv(cols));
      json b;
      try {
        const auto peaks = detect_peaks(t, cols.exact, 0.5);
        b["peak_count"] = peaks.times.size();
        b["peak_period"] = peaks.period;
      } catch (const NoPeaks&) {
        b["peak_count"] = 0;
      }
      b["max_c"] = *std::max_element(cols.exact.begin(), cols.exact.end());
      row[name] = b;
    }
    if (revival) {
      json fractions = json::array();
      const auto window = uniform_grid(std::min(p.order1_limit, 2.0 * std::abs(p.T_hyp)), 1001);
      for (auto [num_, den] : c.fractions()) {
        const auto pred = fractional_prediction(a, p, num_, den, window);
        std::ostringstream os;
        os << "t,abs_clones,abs_revival\n";
        for (std::size_t k = 0; k < window.size(); ++k)
          os << num(window[k]) << ',' << num(std::abs(pred.clones[k])) << ','
             << num(std::abs(pred.revival[k])) << '\n';
        const std::string file =
            dir + "fractional_" + std::to_string(num_) + "_" + std::to_string(den) + ".csv";
        ctx.writer.write(file, os.str());
        fractions.push_back({{"p", num_},
                             {"q", den},
                             {"ell", pred.coefficients.ell},
                             {"revival_time", static_cast<double>(num_) / static_cast<double>(den) *
                                                  static_cast<double>(p.N_h) * p.T_hyp},
                             {"sup_difference", pred.sup_difference},
                             {"file", file}});
      }
      row["fractions"] = fractions;
    }
    rows[i] = row;
  });
  json out = json::array();
  for (auto& r : rows) {
    const auto& ph = r["phase"];
    summary += "h=" + num(r["h"].get<double>()) + " T_hyp=" + num(ph["T_hyp"].get<double>()) +
               " T_rev=" + num(ph["T_rev"].get<double>()) +
               " N_h=" + std::to_string(ph["N_h"].get<std::int64_t>()) + "\n";
    out.push_back(std::move(r));
  }
  return {{"points", out}};
}

json run_gauss(Context& ctx, std::string& summary) {
  json out = json::array();
  for (auto [p, q] : ctx.config.fractions()) {
    const auto set = periodicity_set(p, q);
    const auto coeffs = coefficients(p, q, 0);
    const auto table = gauss_table_csv(coeffs);
    const std::string file = "gauss_" + std::to_string(p) + "_" + std::to_string(q) + ".csv";
    ctx.writer.write(file, table);
    const auto expected = modulus_law(p, q);
    json rows = json::array();
    bool pass = true;
    for (std::size_t k = 0; k < coeffs.b.size(); ++k) {
      const double m = std::norm(coeffs.b[k]);
      const bool ok = std::abs(m - expected[k]) <= 1e-12;
      pass = pass && ok;
      rows.push_back({{"k", k},
                      {"re_b", coeffs.b[k].real()},
                      {"im_b", coeffs.b[k].imag()},
                      {"modulus_squared", m},
                      {"expected", expected[k]},
                      {"pass", ok}});
    }
    out.push_back({{"p", p},
                   {"q", q},
                   {"periods", set.describe()},
                   {"ell", coeffs.ell},
                   {"rows", rows},
                   {"pass", pass},
                   {"file", file}});
    summary += "p=" + std::to_string(p) + " q=" + std::to_string(q) + " periods " + set.describe() +
               " ell=" + std::to_string(coeffs.ell) + "\n" + table;
  }
  return {{"tables", out}};
}

json run_sweep(Context& ctx, std::string& summary) {
  const auto& c = ctx.config;
  if (c.h.size() < 2) throw ConfigError("sweep needs at least two h values");
  struct Point {
    double h = 0.0, log_h = 0.0, period = 0.0;
    std::size_t count = 0;
    std::size_t direct_count = 0;
    PhaseData phase;
  };
  std::vector<Point> points(c.h.size());
  parallel_for(c.h.size(), c.jobs, [&](std::size_t i) {
    Point& pt = points[i];
    pt.h = c.h[i];
    pt.log_h = std::abs(std::log(pt.h));
    const Setup s = make_setup(c, pt.h, ctx.table, false);
    pt.phase = s.phase;
    pt.count = s.window.count();
    pt.period = flow_period(s.model->potential(), pt.h).period;
    if (c.backend != Backend::kModel)
      pt.direct_count = window_spectrum(discretize(s.model->potential(), pt.h)).levels.size();
  });
  std::vector<double> L, thyp, trev, L3, count, period;
  std::ostringstream os;
  os << "h,abs_log_h,n0,window_count,direct_count,T_hyp,T_rev,N_h,fractional_part,curvature,"
        "classical_period\n";
  for (const auto& pt : points) {
    L.push_back(pt.log_h);
    L3.push_back(pt.log_h * pt.log_h * pt.log_h);
    thyp.push_back(std::abs(pt.phase.T_hyp));
    trev.push_back(std::abs(pt.phase.T_rev));
    count.push_back(static_cast<double>(pt.count));
    period.push_back(pt.period);
    os << num(pt.h) << ',' << num(pt.log_h) << ',' << pt.phase.center << ',' << pt.count << ','
       << (c.backend == Backend::kModel ? std::string("nan") : std::to_string(pt.direct_count))
       << ',' << num(pt.phase.T_hyp) << ',' << num(pt.phase.T_rev) << ',' << pt.phase.N_h << ','
       << num(pt.phase.frac) << ',' << num(pt.phase.curvature) << ',' << num(pt.period) << '\n';
  }
  ctx.writer.write("sweep.csv", os.str());
  const auto f_thyp = fit_line(L, thyp);
  const auto f_trev = fit_line(L3, trev);
  const auto f_count = fit_line(L, count);
  const auto f_period = fit_line(L, period);
  // Curvature K in T_rev = |ln h|^3 / (K omega^3), taken from the fit.
  const double omega = std::sqrt(2.0);
  summary += "T_hyp ~ " + num(f_thyp.slope) + " |ln h| + " + num(f_thyp.intercept) +
             " (max residual " + num(f_thyp.max_abs_residual / std::abs(f_thyp.slope)) +
             " of slope)\n";
  summary += "T_rev ~ " + num(f_trev.slope) + " |ln h|^3\n";
  return {{"T_hyp_vs_abs_log_h", fit_json(f_thyp)},
          {"T_hyp_residual_over_slope", f_thyp.max_abs_residual / std::abs(f_thyp.slope)},
          {"T_rev_vs_abs_log_h_cubed", fit_json(f_trev)},
          {"K_fit", 1.0 / (f_trev.slope * omega * omega * omega)},
          {"window_count_vs_abs_log_h", fit_json(f_count)},
          {"classical_period_vs_abs_log_h", fit_json(f_period)},
          {"file", "sweep.csv"}};
}

std::string plot_script(const RunConfig& c, const std::vector<std::string>& files) {
  std::ostringstream os;
  os << "# gnuplot script for the CSV files of this run\n"
     << "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 1000,600\n";
  int n = 0;
  for (const auto& f : files) {
    if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
    os << "set output 'plot_" << n++ << ".png'\n";
    if (f.find("series_") != std::string::npos) {
      os << "set xlabel 't / |T_hyp|'\nplot '" << f << "' using 2:3 with lines, '' using 2:6 with lines"
         << ", '' using 2:7 with lines\n";
    } else if (f.find("spectrum_") != std::string::npos) {
      os << "set xlabel 'index'\nplot '" << f << "' using 2:4 with points\n";
    } else if (f.find("coefficients_") != std::string::npos) {
      os << "set xlabel 'n - n0'\nplot '" << f << "' using 2:3 with impulses\n";
    } else if (f.find("fractional_") != std::string::npos) {
      os << "set xlabel 't'\nplot '" << f << "' using 1:2 with lines, '' using 1:3 with lines\n";
    } else if (f.find("gauss_") != std::string::npos) {
      os << "set xlabel 'k'\nplot '" << f << "' using 1:4 with points, '' using 1:5 with lines\n";
    } else if (f == "sweep.csv") {
      os << "set xlabel '|ln h|'\nplot '" << f << "' using 2:(abs($6)) with linespoints, '' using 2:11"
         << " with linespoints\n";
    }
  }
  (void)c;
  return os.str();
}

json config_json(const RunConfig& c) {
  json j = {{"command", c.command},
            {"potential", c.potential},
            {"h", c.h},
            {"E", c.E},
            {"chi", c.chi},
            {"backend", backend_name(c.backend)},
            {"jobs", c.jobs},
            {"p", c.p},
            {"q", c.q}};
  if (c.command != "gauss") {
    j["gamma"] = c.resolved_gamma();
    j["gamma_prime"] = c.resolved_gamma_prime();
    j["alpha"] = c.resolved_alpha();
    if (c.revival_regime()) {
      j["beta"] = c.resolved_beta();
      j["revival_span"] = c.revival_span;
    }
    if (c.command == "evolve" && c.periods) j["periods"] = *c.periods;
  }
  return j;
}

}  // namespace

RunResult run(const RunConfig& config) {
  validate(config);
  Writer writer(config.out);
  Context ctx{config, writer, nullptr};
  if (config.command != "gauss")
    ctx.table = std::make_shared<const ActionTable>(canonical_double_well(), ModelOptions{}.delta);
  RunResult result;
  json body;
  if (config.command == "spectrum") body = run_spectrum(ctx, result.summary);
  else if (config.command == "packet") body = run_packet(ctx, result.summary);
  else if (config.command == "evolve") body = run_evolve(ctx, result.summary, false);
  else if (config.command == "revival") body = run_evolve(ctx, result.summary, true);
  else if (config.command == "gauss") body = run_gauss(ctx, result.summary);
  else body = run_sweep(ctx, result.summary);
  auto files = writer.files();
  writer.write("plot.gp", plot_script(config, files));
  files.push_back("plot.gp");
  std::sort(files.begin(), files.end());
  result.manifest = {{"parameters", config_json(config)}, {"results", body}, {"files", files}};
  files.push_back("manifest.json");
  writer.write("manifest.json", result.manifest.dump(2) + "\n");
  result.files = files;
  return result;
}

}  // namespace revivalkit
