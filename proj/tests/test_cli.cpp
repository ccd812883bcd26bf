#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "revivalkit/cli.hpp"
#include "revivalkit/errors.hpp"

using namespace revivalkit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("revivalkit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string output;
};

// Runs the command-line tool with the given arguments; stdout and stderr merged.
Outcome tool(const std::string& args, const std::string& env = "") {
  const char* exe = std::getenv("REVIVALKIT_TOOL");
  REQUIRE(exe != nullptr);
  const std::string cmd = env + " '" + std::string(exe) + "' " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

RunConfig config(const std::string& command, const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("gauss p=1 q=4 gives two clones of weight one half") {
  const auto dir = scratch("gauss");
  const auto r = tool("gauss --p 1 --q 4 --out '" + dir.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.output.find("ell=2") != std::string::npos);
  const json m = json::parse(slurp(dir / "manifest.json"));
  const auto& table = m["results"]["tables"][0];
  CHECK(table["ell"] == 2);
  CHECK(table["periods"] == "2Z");
  REQUIRE(table["rows"].size() == 2);
  for (const auto& row : table["rows"]) {
    CHECK(row["modulus_squared"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row["pass"] == true);
  }
  CHECK(fs::exists(dir / "gauss_1_4.csv"));
  CHECK(fs::exists(dir / "plot.gp"));
  CHECK(slurp(dir / "plot.gp").find("gauss_1_4.csv") != std::string::npos);
}

TEST_CASE("evolve past the order-1 window names TimeScaleError") {
  const auto dir = scratch("evolve_late");
  const auto r = tool("evolve --h 1e-3 --periods 50 --out '" + dir.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.output.find("TimeScaleError") != std::string::npos);
  CHECK(r.output.find("revivalkit evolve") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  const auto dir = scratch("bad");
  const std::string out = " --out '" + dir.string() + "'";
  auto r = tool("packet --gamma 0.5 --gamma-prime 0.2" + out);
  CHECK(r.code == 2);
  CHECK(r.output.find("gamma + gamma' > 1") != std::string::npos);
  r = tool("gauss --p 2 --q 4" + out);
  CHECK(r.code == 2);
  CHECK(r.output.find("NotCoprime") != std::string::npos);
  CHECK(tool("packet --h 2" + out).code == 2);
  CHECK(tool("packet --h abc" + out).code == 2);
  CHECK(tool("packet --backend quantum" + out).code == 2);
  CHECK(tool("" + out).code == 2);
  CHECK(tool("revival --gamma 0.5" + out).code == 2);
}

TEST_CASE("sweep reports the hyperbolic period fit") {
  const auto dir = scratch("sweep");
  const auto r = tool("sweep --h 1e-2,1e-3,1e-4,1e-5 --jobs 2 --quiet --out '" + dir.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.output.empty());
  const json m = json::parse(slurp(dir / "manifest.json"));
  const auto& res = m["results"];
  REQUIRE(res.contains("T_hyp_vs_abs_log_h"));
  const double slope = res["T_hyp_vs_abs_log_h"]["slope"].get<double>();
  CHECK(slope > 0.0);
  CHECK(res["T_hyp_residual_over_slope"].get<double>() >= 0.0);
  CHECK(res.contains("T_rev_vs_abs_log_h_cubed"));
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(m["files"] == json{"plot.gp", "sweep.csv"});
}

TEST_CASE("identical configurations give identical files") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    auto c = config("evolve", dir);
    c.h = {1e-3, 1e-4};
    c.gamma_prime = 0.8;
    c.jobs = dir == a ? 1 : 2;
    c.backend = Backend::kBoth;
    run(c);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (rel.filename() == "manifest.json") continue;
    CHECK(slurp(entry.path()) == slurp(b / rel));
    ++compared;
  }
  CHECK(compared >= 5);
}

TEST_CASE("series csv layout") {
  const auto dir = scratch("series");
  auto c = config("evolve", dir);
  const auto result = run(c);
  const std::string csv = slurp(dir / "h_0.001" / "series_model.csv");
  CHECK(csv.rfind("t,t_over_T_hyp,c_exact,abs_a,abs_a1,abs_a2,closed_form\n", 0) == 0);
  // second line starts at t = 0 with c = 1
  const auto line = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n') - 1);
  CHECK(line.rfind("0,0,1", 0) == 0);
  // no --periods: the grid fills the order-1 window
  CHECK_FALSE(result.manifest["parameters"].contains("periods"));
  const double limit = result.manifest["results"]["points"][0]["phase"]["order1_limit"].get<double>();
  const auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  CHECK(std::stod(last.substr(0, last.find(','))) == doctest::Approx(limit));
  CHECK(result.manifest["results"]["points"][0]["model"]["max_c"].get<double>() ==
        doctest::Approx(1.0));
}

TEST_CASE("packet manifest") {
  const auto dir = scratch("packet");
  auto c = config("packet", dir);
  c.h = {1e-6};
  c.gamma_prime = 0.8;
  const auto res = run(c).manifest["results"]["points"][0];
  CHECK(res["K_h_relative_error"].get<double>() <= 1e-3);
  CHECK(res["delta_size"].get<std::int64_t>() ==
        2 * static_cast<std::int64_t>(std::floor(std::pow(std::abs(std::log(1e-6)), 0.9))) + 1);
  CHECK(fs::exists(dir / "h_1e-06" / "coefficients_alpha.csv"));
  CHECK(fs::exists(dir / "h_1e-06" / "coefficients_beta.csv"));
}

TEST_CASE("spectrum and revival runs") {
  const auto dir = scratch("spectrum");
  auto c = config("spectrum", dir);
  c.h = {1e-3};
  c.backend = Backend::kBoth;
  const auto m = run(c).manifest;
  CHECK(fs::exists(dir / "h_0.001" / "spectrum_model.csv"));
  CHECK(fs::exists(dir / "h_0.001" / "spectrum_direct.csv"));
  const auto rdir = scratch("revival");
  auto r = config("revival", rdir);
  r.h = {1e-4};
  r.p = {1, 1};
  r.q = {2, 3};
  r.revival_span = 0.5;
  const auto rm = run(r).manifest;
  CHECK(rm["parameters"]["beta"].get<double>() == doctest::Approx(3.05));
  CHECK(rm["results"]["points"][0]["fractions"].size() == 2);
  CHECK(fs::exists(rdir / "h_0.0001" / "fractional_1_3.csv"));
}

TEST_CASE("environment and configuration file") {
  const auto env_dir = scratch("env");
  auto r = tool("gauss --p 1 --q 3 --quiet", "REVIVALKIT_OUT='" + env_dir.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(env_dir / "gauss_1_3.csv"));

  const auto dir = scratch("config");
  const auto file = dir / "run.json";
  std::ofstream(file) << json{{"p", {1, 2}}, {"q", 5}, {"out", (dir / "from_file").string()}}.dump();
  r = tool("gauss --quiet --config '" + file.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "from_file" / "gauss_2_5.csv"));
  // flags win over the file
  r = tool("gauss --quiet --q 7 --config '" + file.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "from_file" / "gauss_2_7.csv"));

  std::ofstream(dir / "bad.json") << R"({"gamma_prim": 0.3})";
  r = tool("packet --config '" + (dir / "bad.json").string() + "' --out '" + dir.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.output.find("gamma_prim") != std::string::npos);
  CHECK(tool("packet --config '" + (dir / "missing.json").string() + "'").code == 2);
}

TEST_CASE("in-process configuration") {
  RunConfig c;
  apply_config(json{{"gamma_prime", 0.5}, {"revival-span", 2.0}, {"h", 1e-4}, {"backend", "direct"}}, c);
  CHECK(c.gamma_prime.value() == 0.5);
  CHECK(c.revival_span == 2.0);
  CHECK(c.h == std::vector<double>{1e-4});
  CHECK(c.backend == Backend::kDirect);
  CHECK_THROWS_AS(apply_config(json{{"h", "small"}}, c), ConfigError);
  CHECK_THROWS_AS(apply_config(json::array(), c), ConfigError);
  c.command = "evolve";
  CHECK(c.resolved_gamma() == 0.9);
  CHECK(c.resolved_alpha() == doctest::Approx(1.1));
  c.command = "revival";
  CHECK(c.resolved_gamma() == 0.3);
  CHECK(c.resolved_gamma_prime() == 0.5);
  c.p = {1, 2, 3};
  c.q = {2, 5};
  CHECK_THROWS_AS(c.fractions(), ConfigError);
  c.command = "nonsense";
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(exit_code_for(TimeScaleError("x")) == 2);
  CHECK(exit_code_for(NoPeaks("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 3);
}
