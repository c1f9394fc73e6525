#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dampns/config.hpp"
#include "dampns/errors.hpp"

using namespace dampns;

namespace {

const char* kSimulate = R"(
; comment
[experiment]
mode = simulate
seed = 7

[grid]
n = 16
box_length = 16pi

[physics]
alpha = 0.75
beta = 2
nu = 0.5

[solver]
dt = 0.01
t_end = 2
record_every = 0.1
integrator = imex_euler
adaptive = yes
)";

std::string error_of(const FlatConfig& flat) {
  try {
    parse_config(flat);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string to_ini(const FlatConfig& flat) {
  std::string text, section;
  for (const auto& [k, v] : flat) {
    const auto dot = k.find('.');
    if (k.substr(0, dot) != section) {
      section = k.substr(0, dot);
      text += "[" + section + "]\n";
    }
    text += k.substr(dot + 1) + " = " + v + "\n";
  }
  return text;
}

}  // namespace

TEST_CASE("parse a simulate config") {
  const auto c = parse_config(parse_config_text(kSimulate));
  CHECK(c.mode == ExperimentMode::simulate);
  CHECK(c.seed == 7);
  CHECK(c.solver.grid.n == 16);
  CHECK(c.solver.grid.box_length == doctest::Approx(16 * kPi).epsilon(1e-15));
  CHECK(c.solver.params == PhysicalParams{0.75, 2.0, 0.5});
  CHECK(c.solver.integrator == Integrator::imex_euler);
  CHECK(c.solver.adaptive);
  CHECK(c.alphas() == std::vector<double>{0.75});
  CHECK(c.fit_window == FitWindow{1.0, 20.0});
  CHECK(c.ledger);
  CHECK(c.output_dir == "dampns-out");
}

TEST_CASE("reals accept a pi suffix") {
  auto flat = parse_config_text(kSimulate);
  for (auto [text, value] : std::vector<std::pair<std::string, double>>{
           {"pi", kPi}, {"2*pi", 2 * kPi}, {"2 * pi", 2 * kPi}, {"0.5pi", 0.5 * kPi}, {"3.5", 3.5}}) {
    flat["grid.box_length"] = text;
    CHECK(parse_config(flat).solver.grid.box_length == value);
  }
  flat["grid.box_length"] = "pie";
  CHECK(error_of(flat).rfind("grid.box_length:", 0) == 0);
}

TEST_CASE("round trip through the flat form and INI text") {
  auto flat = parse_config_text(kSimulate);
  flat["sweep.beta"] = "1, 2.5, 3";
  flat["fit.t_lo"] = "0.1";
  flat["ledger.prefactor"] = "7.25";
  const auto c = parse_config(flat);
  CHECK(c.sweep_beta == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parse_config(to_flat(c)) == c);
  CHECK(parse_config(parse_config_text(to_ini(to_flat(c)))) == c);
  CHECK(to_flat(parse_config(to_flat(c))) == to_flat(c));

  ExperimentConfig d;
  d.mode = ExperimentMode::semigroup_verify;
  d.sweep_alpha = {0.5, 1.0 / 3.0};
  d.fit_window = {100.0, 1e4};
  d.solver.params.alpha = 0.1 + 0.2;
  CHECK(parse_config(to_flat(d)) == d);
}

TEST_CASE("mode-specific defaults and requirements") {
  const auto s = parse_config(parse_config_text("[experiment]\nmode = semigroup_verify\n[physics]\nalpha = 1\n"));
  CHECK(s.fit_window == FitWindow{100.0, 1e4});
  CHECK(s.fit_samples == 40);

  CHECK(error_of(parse_config_text("")) == "experiment.mode: required");
  CHECK(error_of(parse_config_text("[experiment]\nmode = fly\n")).rfind("experiment.mode:", 0) == 0);
  CHECK(error_of(parse_config_text("[experiment]\nmode = exponent_table\n[physics]\nalpha = 1\n"))
            .rfind("physics.beta: required", 0) == 0);
  CHECK(error_of(parse_config_text("[experiment]\nmode = simulate\n[physics]\nalpha = 1\nbeta = 2\n"))
            .rfind("solver.dt: required", 0) == 0);
  CHECK_NOTHROW(parse_config(parse_config_text("[experiment]\nmode = exponent_table\n[sweep]\nalpha = 1\nbeta = 1,2\n")));
}

TEST_CASE("field-level validation messages") {
  const auto base = parse_config_text(kSimulate);
  auto expect = [&](const std::string& key, const std::string& value, const std::string& prefix) {
    auto flat = base;
    flat[key] = value;
    const std::string msg = error_of(flat);
    CHECK_MESSAGE(msg.rfind(prefix, 0) == 0, msg);
  };
  expect("grid.n", "15", "grid.n:");
  expect("grid.n", "sixteen", "grid.n:");
  expect("grid.dim", "4", "grid.dim:");
  expect("physics.alpha", "2.5", "physics.alpha:");
  expect("physics.beta", "0.5", "physics.beta:");
  expect("physics.nu", "-1", "physics.nu:");
  expect("sweep.beta", "", "sweep.beta:");
  expect("sweep.alpha", "1, 3", "sweep.alpha:");
  expect("solver.dt", "0", "solver.dt:");
  expect("solver.record_every", "0.001", "solver.record_every:");
  expect("solver.cfl_safety", "1.5", "solver.cfl_safety:");
  expect("solver.integrator", "rk4", "solver.integrator:");
  expect("solver.adaptive", "maybe", "solver.adaptive:");
  expect("initial.kind", "noise", "initial.kind:");
  expect("fit.t_hi", "0.5", "fit.t_hi:");
  expect("experiment.seed", "-3", "experiment.seed:");
  expect("physics.gamma", "1", "physics.gamma: unknown key");
}

TEST_CASE("overrides") {
  auto flat = parse_config_text(kSimulate);
  apply_override(flat, "grid.n=32");
  apply_override(flat, " physics.beta = 3 ");
  const auto c = parse_config(flat);
  CHECK(c.solver.grid.n == 32);
  CHECK(c.solver.params.beta == 3.0);
  CHECK_THROWS_AS(apply_override(flat, "grid.n"), ValidationError);
  CHECK_THROWS_AS(apply_override(flat, "grid.size=3"), ValidationError);
}

TEST_CASE("config files") {
  CHECK_THROWS_AS(read_config_file("/nonexistent/dampns.ini"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "dampns_config_test.ini";
  {
    std::ofstream out(path);
    out << "[experiment\nmode = simulate\n";
  }
  CHECK_THROWS_AS(read_config_file(path.string()), ValidationError);
  {
    std::ofstream out(path);
    out << kSimulate;
  }
  CHECK(parse_config(read_config_file(path.string())).seed == 7);
  std::filesystem::remove(path);
  CHECK(experiment_mode_from_string("bootstrap_trace") == ExperimentMode::bootstrap_trace);
  CHECK(format_real(0.1) == "0.10000000000000001");
}
