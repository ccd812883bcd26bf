#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace revivalkit {

enum class Backend { kModel, kDirect, kBoth };

const char* backend_name(Backend b);
Backend backend_by_name(const std::string& name);

struct RunConfig {
  std::string command;
  std::string potential = "double-well";
  std::vector<double> h = {1e-3};
  double E = 0.0;
  // Unset exponents take the regime defaults of the subcommand.
  std::optional<double> gamma;
  std::optional<double> gamma_prime;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string chi = "gaussian";
  // Time grid: evolve spans `periods` hyperbolic periods, or the whole
  // order-1 window when unset; revival spans `revival_span` revival periods.
  std::optional<double> periods;
  double revival_span = 1.2;
  std::vector<std::int64_t> p = {1};
  std::vector<std::int64_t> q = {2};
  std::string out = "revivalkit_out";
  Backend backend = Backend::kModel;
  int jobs = 1;

  bool revival_regime() const { return command == "revival"; }
  double resolved_gamma() const;
  double resolved_gamma_prime() const;
  double resolved_alpha() const;
  double resolved_beta() const;
  std::vector<std::pair<std::int64_t, std::int64_t>> fractions() const;
};

// Default output directory: $REVIVALKIT_OUT, else "revivalkit_out".
std::string default_output_directory();

// Reads a JSON object; keys mirror the long flag names with '-' or '_'.
RunConfig load_config(const std::string& path, RunConfig base = {});
void apply_config(const nlohmann::json& j, RunConfig& config);

// Throws ConfigError / ParameterError naming the violated constraint.
void validate(const RunConfig& config);

struct RunResult {
  nlohmann::json manifest;
  std::vector<std::string> files;  // relative to config.out
  std::string summary;             // human-readable lines for stdout
};

// Validates, runs the subcommand and writes CSV files, manifest.json and
// plot.gp under config.out.
RunResult run(const RunConfig& config);

// Maps exceptions to exit codes: 0 ok, 2 configuration, 3 numerical.
int exit_code_for(const std::exception& e);

}  // namespace revivalkit
