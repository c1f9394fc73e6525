#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "dampns/config.hpp"
#include "dampns/errors.hpp"
#include "dampns/harness.hpp"

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& overrides,
                std::optional<unsigned> workers, const std::string& output_dir) {
  using namespace dampns;
  try {
    FlatConfig flat = read_config_file(config_path);
    for (const auto& o : overrides) apply_override(flat, o);
    if (!output_dir.empty()) flat["experiment.output_dir"] = output_dir;
    const ExperimentConfig config = parse_config(flat);
    const ExperimentResult result = run_experiment(config, resolve_workers(workers));
    for (const auto& r : result.runs)
      if (!r.ok) std::cerr << "dampns: " << r.id << " failed: " << r.error << "\n";
    std::cout << result.index_path << "\n";
    return result.exit_code();
  } catch (const ValidationError& e) {
    std::cerr << "dampns: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "dampns: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "dampns: runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped fractional Navier-Stokes experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<unsigned> workers;
  std::string output_dir;
  run->add_option("config", config_path, "INI config file")->required();
  run->add_option("--set", overrides, "Override a config value (section.key=value)");
  run->add_option("--workers", workers, "Concurrent sweep runs (default: $DAMPNS_WORKERS or 1)");
  run->add_option("--output-dir", output_dir, "Directory for the artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dampns::kExitValidation;
  }
  return run_command(config_path, overrides, workers, output_dir);
}
