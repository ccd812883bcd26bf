#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "revivalkit/cli.hpp"
#include "revivalkit/errors.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T value;
    if (!(is >> value) || !(is >> std::ws).eof())
      throw revivalkit::ConfigError(std::string("cannot parse ") + flag + " value '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw revivalkit::ConfigError(std::string(flag) + " needs a value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical spectra, wave packets and revivals of a double well"};
  app.require_subcommand(1, 1);
  // --h is the semiclassical parameter, so help keeps only its long form
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  std::string config_path, h_list, p_list, q_list, backend, out, chi;
  double E = 0, gamma = 0, gamma_prime = 0, alpha = 0, beta = 0, periods = 0, span = 0;
  int jobs = 1;
  bool quiet = false;

  app.add_option("--config", config_path, "JSON configuration file; flags override it");
  app.add_option("--h", h_list, "semiclassical parameter, comma-separated list");
  app.add_option("--E", E, "rescaled energy in [-1, 1]");
  app.add_option("--gamma", gamma, "exponent of the Delta window");
  app.add_option("--gamma-prime", gamma_prime, "localization exponent");
  app.add_option("--alpha", alpha, "order-1 time window exponent");
  app.add_option("--beta", beta, "order-2 time window exponent");
  app.add_option("--chi", chi, "profile: gaussian or bump");
  app.add_option("--p", p_list, "fraction numerators, comma-separated");
  app.add_option("--q", q_list, "fraction denominators, comma-separated");
  app.add_option("--backend", backend, "model, direct or both");
  app.add_option("--out", out, "output directory (default $REVIVALKIT_OUT or revivalkit_out)");
  app.add_option("--jobs", jobs, "worker threads for multi-h runs");
  app.add_option("--periods", periods, "evolve: number of hyperbolic periods (default: the order-1 window)");
  app.add_option("--revival-span", span, "revival: grid length in revival periods");
  app.add_flag("--quiet", quiet, "print nothing on success");

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "window eigenvalues from the model and/or the direct solver"},
      {"packet", "packet coefficients of both families"},
      {"evolve", "return amplitude and its order-1/order-2 approximations"},
      {"revival", "fractional revivals at the requested p/q"},
      {"gauss", "Gauss-sum coefficients b_k for each p/q"},
      {"sweep", "periods and window counts over a list of h"},
  };
  for (const auto& [name, about] : commands) app.add_subcommand(name, about)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    revivalkit::RunConfig config;
    config.out = revivalkit::default_output_directory();
    if (!config_path.empty()) config = revivalkit::load_config(config_path, config);
    config.command = command;
    auto given = [&](const char* flag) { return app.count(flag) > 0; };
    if (given("--h")) config.h = parse_list<double>(h_list, "--h");
    if (given("--E")) config.E = E;
    if (given("--gamma")) config.gamma = gamma;
    if (given("--gamma-prime")) config.gamma_prime = gamma_prime;
    if (given("--alpha")) config.alpha = alpha;
    if (given("--beta")) config.beta = beta;
    if (given("--chi")) config.chi = chi;
    if (given("--p")) config.p = parse_list<std::int64_t>(p_list, "--p");
    if (given("--q")) config.q = parse_list<std::int64_t>(q_list, "--q");
    if (given("--backend")) config.backend = revivalkit::backend_by_name(backend);
    if (given("--out")) config.out = out;
    if (given("--jobs")) config.jobs = jobs;
    if (given("--periods")) config.periods = periods;
    if (given("--revival-span")) config.revival_span = span;

    const auto result = revivalkit::run(config);
    if (!quiet) {
      std::cout << result.summary;
      std::cout << "wrote " << result.files.size() << " files to " << config.out << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "revivalkit " << command << ": " << e.what() << "\n";
    return revivalkit::exit_code_for(e);
  }
}
