#include "dampns/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dampns/errors.hpp"

namespace dampns {

std::string_view to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::simulate: return "simulate";
    case ExperimentMode::semigroup_verify: return "semigroup_verify";
    case ExperimentMode::exponent_table: return "exponent_table";
    case ExperimentMode::bootstrap_trace: return "bootstrap_trace";
  }
  return "?";
}

ExperimentMode experiment_mode_from_string(std::string_view s) {
  for (auto m : {ExperimentMode::simulate, ExperimentMode::semigroup_verify, ExperimentMode::exponent_table,
                 ExperimentMode::bootstrap_trace})
    if (to_string(m) == s) return m;
  throw ValidationError("unknown experiment mode '" + std::string(s) + "'");
}

std::vector<double> ExperimentConfig::alphas() const {
  return sweep_alpha.empty() ? std::vector<double>{solver.params.alpha} : sweep_alpha;
}

std::vector<double> ExperimentConfig::betas() const {
  return sweep_beta.empty() ? std::vector<double>{solver.params.beta} : sweep_beta;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment.mode", "experiment.seed",     "experiment.output_dir", "grid.n",           "grid.box_length",
    "grid.dim",        "physics.alpha",       "physics.beta",          "physics.nu",       "solver.dt",
    "solver.t_end",    "solver.cfl_safety",   "solver.record_every",   "solver.integrator", "solver.adaptive",
    "solver.advection", "solver.convection",  "initial.kind",          "initial.amplitude", "sweep.alpha",
    "sweep.beta",      "fit.t_lo",            "fit.t_hi",              "fit.samples",      "ledger.enabled",
    "ledger.prefactor"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& key, const std::string& reason) {
  throw ValidationError(key + ": " + reason);
}

double parse_real(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return kPi;
  }
  if (s.empty()) fail(key, "expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    fail(key, "expected a number, got '" + trim(raw) + "'");
  return v * factor;
}

long long parse_integer(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    fail(key, "expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(key, "expected true or false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) fail(key, "list must not be empty");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}

template <class F>
auto with_key(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(key + ":", 0) == 0) throw;
    fail(key, what);
  }
}

}  // namespace

ExperimentConfig parse_config(const FlatConfig& flat) {
  for (const auto& [k, v] : flat)
    if (!kKnownKeys.count(k)) fail(k, "unknown key");

  auto get = [&](const std::string& k) -> const std::string* {
    auto it = flat.find(k);
    return it == flat.end() ? nullptr : &it->second;
  };

  ExperimentConfig c;
  const std::string* mode = get("experiment.mode");
  if (!mode) fail("experiment.mode", "required");
  c.mode = with_key("experiment.mode", [&] { return experiment_mode_from_string(trim(*mode)); });

  if (c.mode == ExperimentMode::semigroup_verify) c.fit_window = {100.0, 1e4};

  if (auto v = get("experiment.seed")) {
    const long long s = parse_integer("experiment.seed", *v);
    if (s < 0) fail("experiment.seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("experiment.output_dir")) {
    c.output_dir = trim(*v);
    if (c.output_dir.empty()) fail("experiment.output_dir", "must not be empty");
  }

  auto& g = c.solver.grid;
  if (auto v = get("grid.n")) {
    const long long n = parse_integer("grid.n", *v);
    if (n < 4 || n % 2 != 0) fail("grid.n", "must be an even integer >= 4");
    g.n = static_cast<int>(n);
  }
  if (auto v = get("grid.box_length")) g.box_length = parse_real("grid.box_length", *v);
  if (auto v = get("grid.dim")) g.dim = static_cast<int>(parse_integer("grid.dim", *v));
  if (!(g.box_length > 0.0)) fail("grid.box_length", "must be positive");
  if (g.dim != 2 && g.dim != 3) fail("grid.dim", "must be 2 or 3");

  auto& p = c.solver.params;
  const bool needs_beta = c.mode != ExperimentMode::semigroup_verify;
  if (auto v = get("physics.alpha")) p.alpha = parse_real("physics.alpha", *v);
  if (auto v = get("physics.beta")) p.beta = parse_real("physics.beta", *v);
  if (auto v = get("physics.nu")) p.nu = parse_real("physics.nu", *v);
  if (auto v = get("sweep.alpha")) c.sweep_alpha = parse_list("sweep.alpha", *v);
  if (auto v = get("sweep.beta")) c.sweep_beta = parse_list("sweep.beta", *v);
  if (!get("physics.alpha") && !get("sweep.alpha"))
    fail("physics.alpha", "required for mode " + std::string(to_string(c.mode)) + " (or give sweep.alpha)");
  if (needs_beta && !get("physics.beta") && !get("sweep.beta"))
    fail("physics.beta", "required for mode " + std::string(to_string(c.mode)) + " (or give sweep.beta)");

  for (double a : c.alphas())
    if (!(a > 0.0 && a <= 2.0)) fail(c.sweep_alpha.empty() ? "physics.alpha" : "sweep.alpha", "must lie in (0, 2]");
  for (double b : c.betas())
    if (!(b >= 1.0)) fail(c.sweep_beta.empty() ? "physics.beta" : "sweep.beta", "must be >= 1");
  if (!(p.nu >= 0.0)) fail("physics.nu", "must be >= 0");

  auto& s = c.solver;
  if (c.mode == ExperimentMode::simulate) {
    if (!get("solver.dt")) fail("solver.dt", "required for mode simulate");
    if (!get("solver.t_end")) fail("solver.t_end", "required for mode simulate");
  }
  if (auto v = get("solver.dt")) s.dt = parse_real("solver.dt", *v);
  if (auto v = get("solver.t_end")) s.t_end = parse_real("solver.t_end", *v);
  if (auto v = get("solver.cfl_safety")) s.cfl_safety = parse_real("solver.cfl_safety", *v);
  if (auto v = get("solver.record_every")) s.record_every = parse_real("solver.record_every", *v);
  if (auto v = get("solver.integrator"))
    s.integrator = with_key("solver.integrator", [&] { return integrator_from_string(trim(*v)); });
  if (auto v = get("solver.adaptive")) s.adaptive = parse_bool("solver.adaptive", *v);
  if (auto v = get("solver.advection")) s.advection = parse_bool("solver.advection", *v);
  if (auto v = get("solver.convection"))
    s.convection = with_key("solver.convection", [&] { return convection_form_from_string(trim(*v)); });
  if (!(s.dt > 0.0)) fail("solver.dt", "must be positive");
  if (!(s.t_end > 0.0)) fail("solver.t_end", "must be positive");
  if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0)) fail("solver.cfl_safety", "must lie in (0, 1]");
  if (!(s.record_every >= s.dt)) fail("solver.record_every", "must be at least solver.dt");

  if (auto v = get("initial.kind"))
    c.initial_kind = with_key("initial.kind", [&] { return initial_kind_from_string(trim(*v)); });
  if (auto v = get("initial.amplitude")) c.amplitude = parse_real("initial.amplitude", *v);
  if (!(c.amplitude > 0.0)) fail("initial.amplitude", "must be positive");

  if (auto v = get("fit.t_lo")) c.fit_window.t_lo = parse_real("fit.t_lo", *v);
  if (auto v = get("fit.t_hi")) c.fit_window.t_hi = parse_real("fit.t_hi", *v);
  if (!(c.fit_window.t_lo >= 0.0)) fail("fit.t_lo", "must be >= 0");
  if (!(c.fit_window.t_hi > c.fit_window.t_lo)) fail("fit.t_hi", "must exceed fit.t_lo");
  if (auto v = get("fit.samples")) c.fit_samples = static_cast<int>(parse_integer("fit.samples", *v));
  if (c.mode == ExperimentMode::semigroup_verify) {
    if (c.fit_samples < 20) fail("fit.samples", "must be >= 20");
    if (c.fit_window.t_lo < 1.0) fail("fit.t_lo", "must be >= 1 for mode semigroup_verify");
    if (c.fit_window.t_hi < 100.0 * c.fit_window.t_lo) fail("fit.t_hi", "must be >= 100 * fit.t_lo");
  }

  if (auto v = get("ledger.enabled")) c.ledger = parse_bool("ledger.enabled", *v);
  if (auto v = get("ledger.prefactor")) c.ledger_prefactor = parse_real("ledger.prefactor", *v);
  if (!(c.ledger_prefactor > 0.0)) fail("ledger.prefactor", "must be positive");

  return c;
}

FlatConfig to_flat(const ExperimentConfig& c) {
  FlatConfig f;
  f["experiment.mode"] = std::string(to_string(c.mode));
  f["experiment.seed"] = std::to_string(c.seed);
  f["experiment.output_dir"] = c.output_dir;
  f["grid.n"] = std::to_string(c.solver.grid.n);
  f["grid.box_length"] = format_real(c.solver.grid.box_length);
  f["grid.dim"] = std::to_string(c.solver.grid.dim);
  f["physics.alpha"] = format_real(c.solver.params.alpha);
  f["physics.beta"] = format_real(c.solver.params.beta);
  f["physics.nu"] = format_real(c.solver.params.nu);
  f["solver.dt"] = format_real(c.solver.dt);
  f["solver.t_end"] = format_real(c.solver.t_end);
  f["solver.cfl_safety"] = format_real(c.solver.cfl_safety);
  f["solver.record_every"] = format_real(c.solver.record_every);
  f["solver.integrator"] = std::string(to_string(c.solver.integrator));
  f["solver.adaptive"] = c.solver.adaptive ? "true" : "false";
  f["solver.advection"] = c.solver.advection ? "true" : "false";
  f["solver.convection"] = std::string(to_string(c.solver.convection));
  f["initial.kind"] = std::string(to_string(c.initial_kind));
  f["initial.amplitude"] = format_real(c.amplitude);
  if (!c.sweep_alpha.empty()) f["sweep.alpha"] = join(c.sweep_alpha);
  if (!c.sweep_beta.empty()) f["sweep.beta"] = join(c.sweep_beta);
  f["fit.t_lo"] = format_real(c.fit_window.t_lo);
  f["fit.t_hi"] = format_real(c.fit_window.t_hi);
  f["fit.samples"] = std::to_string(c.fit_samples);
  f["ledger.enabled"] = c.ledger ? "true" : "false";
  f["ledger.prefactor"] = format_real(c.ledger_prefactor);
  return f;
}

FlatConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  FlatConfig flat;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (!body.data().empty()) fail(section, "key outside of any [section]");
      continue;
    }
    for (const auto& [key, value] : body) flat[section + "." + key] = trim(value.data());
  }
  return flat;
}

FlatConfig read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading config file '" + path + "'");
  return parse_config_text(ss.str());
}

void apply_override(FlatConfig& flat, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "': expected section.key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.find('.') == std::string::npos || !kKnownKeys.count(key)) fail(key, "unknown key");
  flat[key] = trim(assignment.substr(eq + 1));
}

}  // namespace dampns
