#pragma once

// Experiment configuration. The on-disk format is INI: [section] headers,
// `key = value` lines and `;` comments. Keys are addressed as
// "section.key"; lists are comma separated; reals accept a `pi` suffix
// ("16pi", "2*pi").

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dampns/fractional_heat.hpp"
#include "dampns/solver.hpp"

namespace dampns {

enum class ExperimentMode { simulate, semigroup_verify, exponent_table, bootstrap_trace };
std::string_view to_string(ExperimentMode m);
ExperimentMode experiment_mode_from_string(std::string_view s);

using FlatConfig = std::map<std::string, std::string>;

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::simulate;
  SolverConfig solver;
  InitialKind initial_kind = InitialKind::taylor_green;
  double amplitude = 1.0;
  std::vector<double> sweep_alpha;  // empty: use solver.params.alpha
  std::vector<double> sweep_beta;   // empty: use solver.params.beta
  FitWindow fit_window{1.0, 20.0};
  int fit_samples = 40;  // semigroup_verify sample count
  bool ledger = true;
  double ledger_prefactor = 4.0;
  std::string output_dir = "dampns-out";
  std::uint64_t seed = 0;

  std::vector<double> alphas() const;
  std::vector<double> betas() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates; every problem is reported as
// ValidationError("<section.key>: <reason>").
ExperimentConfig parse_config(const FlatConfig& flat);

// Fully resolved configuration, defaults included. parse_config(to_flat(c)) == c.
FlatConfig to_flat(const ExperimentConfig& config);

// Reads an INI file into flat keys. Missing or unreadable files raise IoError,
// syntax errors ValidationError.
FlatConfig read_config_file(const std::string& path);
FlatConfig parse_config_text(const std::string& text);

// Applies "section.key=value" overrides.
void apply_override(FlatConfig& flat, const std::string& assignment);

std::string format_real(double v);

}  // namespace dampns
