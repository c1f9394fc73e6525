#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dampns/config.hpp"
#include "dampns/errors.hpp"
#include "dampns/harness.hpp"

using namespace dampns;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dampns_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig small_sweep(const fs::path& dir) {
  auto c = parse_config(parse_config_text(R"(
[experiment]
mode = simulate
seed = 3
[grid]
n = 8
[physics]
alpha = 1
nu = 1
[sweep]
beta = 1, 2, 3
[solver]
dt = 0.02
t_end = 0.4
record_every = 0.04
[initial]
kind = low_freq_random
[fit]
t_lo = 0.05
t_hi = 0.4
)"));
  c.output_dir = dir.string();
  return c;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST_CASE("norm series export round trips bit for bit") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-300, 300);
  NormSeries s;
  for (int i = 0; i < 50; ++i) {
    s.times.push_back(0.1 * i + 1e-17 * i);
    s.l2_sq.push_back(std::pow(10.0, u(rng)));
    s.h_alpha_sq.push_back(std::pow(10.0, u(rng)));
    s.l_beta_plus_1_pow.push_back(i == 3 ? 0.0 : std::nextafter(1.0 / 3.0, 1.0) * i);
    s.w_l2_sq.push_back(5e-324 * i);
  }
  const auto dir = scratch("series");
  fs::create_directories(dir);
  const auto path = (dir / "norms.csv").string();
  export_norm_series(s, path);
  const auto text = slurp(path);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(lines(text).front() == "t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq");
  const auto back = import_norm_series(path);
  CHECK(back.times == s.times);
  CHECK(back.l2_sq == s.l2_sq);
  CHECK(back.h_alpha_sq == s.h_alpha_sq);
  CHECK(back.l_beta_plus_1_pow == s.l_beta_plus_1_pow);
  CHECK(back.w_l2_sq == s.w_l2_sq);

  NormSeries one;
  one.times = {0.0};
  one.l2_sq = {2.0};
  one.h_alpha_sq = {3.0};
  one.l_beta_plus_1_pow = {4.0};
  export_norm_series(one, path);
  const auto l = lines(slurp(path));
  REQUIRE(l.size() == 2);
  CHECK(l[1] == "0,2,3,4,");
  const auto b1 = import_norm_series(path);
  CHECK(b1.size() == 1);
  CHECK_FALSE(b1.has_w());

  CHECK_THROWS_AS(export_norm_series(NormSeries{}, path), ValidationError);
  CHECK_THROWS_AS(import_norm_series((dir / "missing.csv").string()), IoError);
  std::ofstream(path) << "t,l2\n0,1\n";
  CHECK_THROWS_AS(import_norm_series(path), ValidationError);
  std::ofstream(path) << "t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq\n0,1,1,1,0\n1,1,1,1,\n";
  CHECK_THROWS_AS(import_norm_series(path), ValidationError);
  std::ofstream(path) << "t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq\n0,1,x,1,\n";
  CHECK_THROWS_AS(import_norm_series(path), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("exponent table artifact") {
  const auto dir = scratch("table");
  auto c = parse_config(parse_config_text("[experiment]\nmode = exponent_table\n[sweep]\nalpha = 1, 0.5\nbeta = 1, 2, 3\n"));
  c.output_dir = dir.string();
  const auto r = run_experiment(c);
  CHECK(r.exit_code() == kExitOk);
  const auto l = lines(slurp(dir / "exponents.csv"));
  REQUIRE(l.size() == 7);
  CHECK(l[0] == "alpha,beta,exponent");
  CHECK(l[1] == "1,1,0.5");
  CHECK(l[2] == "1,2,1.5");
  CHECK(l[3] == "1,3,1.5");
  CHECK(fs::exists(dir / "index.json"));

  c.sweep_alpha = {1.25};
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("semigroup verification summary") {
  const auto dir = scratch("semigroup");
  auto c = parse_config(parse_config_text("[experiment]\nmode = semigroup_verify\n[physics]\nalpha = 1\n"));
  c.output_dir = dir.string();
  REQUIRE(run_experiment(c).exit_code() == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  const auto& fits = j.at("fits");
  REQUIRE(fits.size() >= 1);
  const double e = fits.at(0).at("fitted_exponent").get<double>();
  CHECK(e == doctest::Approx(-1.5).epsilon(0.03));
  CHECK(fits.at(0).at("flagged") == false);
  // the embedded config reproduces the run
  FlatConfig flat;
  for (const auto& [k, v] : j.at("config").items()) flat[k] = v.get<std::string>();
  CHECK(parse_config(flat) == c);
  fs::remove_all(dir);
}

TEST_CASE("simulate sweep is deterministic across reruns and worker counts") {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  auto c = small_sweep(d1);
  const auto r1 = run_experiment(c, 1);
  CHECK(r1.exit_code() == kExitOk);
  REQUIRE(r1.runs.size() == 3);
  CHECK(r1.runs[2].beta == 3.0);
  const auto first = tree(d1);
  CHECK(first.count("run_002/norms.csv"));
  CHECK(first.count("run_000/summary.json"));

  const auto j = nlohmann::json::parse(first.at("run_001/summary.json"));
  CHECK(j.at("status") == "ok");
  CHECK(j.at("run").at("beta").get<double>() == 2.0);
  CHECK(j.at("ledger").at("intervals").get<int>() == 10);
  const auto series = import_norm_series((d1 / "run_001/norms.csv").string());
  CHECK(series.size() == 11);
  CHECK(series.has_w());

  run_experiment(c, 1);
  CHECK(tree(d1) == first);

  c.output_dir = d2.string();
  run_experiment(c, 2);
  auto second = tree(d2);
  // index.json and summaries embed the output directory
  for (auto& [name, text] : second) {
    std::string::size_type p;
    while ((p = text.find(d2.string())) != std::string::npos) text.replace(p, d2.string().size(), d1.string());
  }
  CHECK(second == first);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("aborted runs keep partial artifacts and set the runtime exit code") {
  const auto dir = scratch("abort");
  auto c = parse_config(parse_config_text(R"(
[experiment]
mode = simulate
seed = 3
[grid]
n = 16
[physics]
alpha = 1
beta = 2
[solver]
dt = 0.05
t_end = 0.5
record_every = 0.05
[initial]
kind = low_freq_random
amplitude = 2
)"));
  c.output_dir = dir.string();
  const auto r = run_experiment(c);
  CHECK(r.exit_code() == kExitRuntime);
  REQUIRE(r.runs.size() == 1);
  CHECK_FALSE(r.runs[0].ok);
  CHECK(r.runs[0].error.find("CFL") != std::string::npos);
  CHECK(import_norm_series((dir / "run_000/norms.csv").string()).size() >= 1);
  const auto j = nlohmann::json::parse(slurp(dir / "run_000/summary.json"));
  CHECK(j.at("status") == "aborted");
  const auto idx = nlohmann::json::parse(slurp(dir / "index.json"));
  CHECK(idx.at("exit_code") == 2);
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory is an I/O error") {
  const auto dir = scratch("blocked");
  std::ofstream(dir.string()) << "not a directory";
  auto c = small_sweep(dir / "sub");
  CHECK_THROWS_AS(run_experiment(c), IoError);
  fs::remove(dir);
}

TEST_CASE("worker count resolution") {
  CHECK(resolve_workers(3u) == 3);
  CHECK_THROWS_AS(resolve_workers(0u), ValidationError);
  ::unsetenv("DAMPNS_WORKERS");
  CHECK(resolve_workers(std::nullopt) == 1);
  ::setenv("DAMPNS_WORKERS", "4", 1);
  CHECK(resolve_workers(std::nullopt) == 4);
  CHECK(resolve_workers(2u) == 2);
  ::setenv("DAMPNS_WORKERS", "four", 1);
  CHECK_THROWS_AS(resolve_workers(std::nullopt), ValidationError);
  ::unsetenv("DAMPNS_WORKERS");
}

#ifdef DAMPNS_CLI_PATH
TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    const int status = std::system((std::string(DAMPNS_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const auto good = dir / "table.ini";
  std::ofstream(good) << "[experiment]\nmode = exponent_table\n[physics]\nalpha = 1\nbeta = 2\n";
  std::ofstream(dir / "empty.ini") << "";
  std::ofstream(dir / "unknown.ini") << "[experiment]\nmode = exponent_table\ncolour = red\n";

  CHECK(run("run " + good.string() + " --output-dir " + (dir / "out").string()) == 0);
  CHECK(lines(slurp(dir / "out/exponents.csv")).at(1) == "1,2,1.5");
  CHECK(run("run " + good.string() + " --set physics.beta=3 --output-dir " + (dir / "out3").string()) == 0);
  CHECK(lines(slurp(dir / "out3/exponents.csv")).at(1) == "1,3,1.5");
  CHECK(run("run " + (dir / "empty.ini").string()) == kExitValidation);
  CHECK(run("run " + (dir / "unknown.ini").string()) == kExitValidation);
  CHECK(run("run " + good.string() + " --set physics.alpha=5") == kExitValidation);
  CHECK(run("run " + (dir / "missing.ini").string()) == kExitIo);
  CHECK(run("run " + good.string() + " --output-dir " + (dir / "table.ini" / "x").string()) == kExitIo);
  fs::remove_all(dir);
}
#endif
