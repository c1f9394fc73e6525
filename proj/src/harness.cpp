#include "dampns/harness.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dampns/decay_analysis.hpp"
#include "dampns/energy_ledger.hpp"
#include "dampns/errors.hpp"
#include "dampns/fractional_heat.hpp"

namespace dampns {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int ExperimentResult::exit_code() const {
  for (const auto& r : runs)
    if (!r.ok) return kExitRuntime;
  return kExitOk;
}

unsigned resolve_workers(std::optional<unsigned> requested) {
  if (requested) {
    if (*requested == 0) throw ValidationError("workers: must be at least 1");
    return *requested;
  }
  if (const char* env = std::getenv("DAMPNS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ValidationError("DAMPNS_WORKERS: expected a positive integer, got '" + std::string(env) + "'");
    return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

const char* kNormHeader = "t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

json config_json(const ExperimentConfig& c) {
  json j = json::object();
  for (const auto& [k, v] : to_flat(c)) j[k] = v;
  return j;
}

json fit_json(const DecayFit& f) {
  json j;
  j["exponent"] = f.exponent;
  j["window"] = {f.window.t_lo, f.window.t_hi};
  j["residual"] = f.residual;
  j["theory_exponent"] = f.theory_exponent ? json(*f.theory_exponent) : json(nullptr);
  j["verdict"] = std::string(to_string(f.verdict));
  j["samples"] = f.samples;
  return j;
}

json ledger_json(const LedgerReport& r) {
  json j;
  double worst_residual = 0.0;
  for (double v : r.u_balance_residual) worst_residual = std::max(worst_residual, std::abs(v));
  double min_margin = r.w_inequality_margin.empty() ? 0.0 : r.w_inequality_margin.front();
  for (double v : r.w_inequality_margin) min_margin = std::min(min_margin, v);
  j["prefactor"] = r.prefactor;
  j["intervals"] = r.times.size();
  j["violations"] = r.violations.size();
  j["first_violation_t"] = r.violations.empty() ? json(nullptr) : json(r.violations.front().t);
  j["min_margin"] = min_margin;
  // null: no finite prefactor suffices
  j["min_sufficient_prefactor"] = r.min_sufficient_prefactor;
  j["max_abs_energy_residual"] = worst_residual;
  return j;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
// exception by index is rethrown after every thread joined.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string run_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", i);
  return buf;
}

struct Combo {
  double alpha, beta;
};

std::vector<Combo> sweep_grid(const ExperimentConfig& c) {
  std::vector<Combo> out;
  for (double a : c.alphas())
    for (double b : c.betas()) out.push_back({a, b});
  return out;
}

void require_theorem_range(const ExperimentConfig& c) {
  for (double a : c.alphas())
    if (!(a < 1.25))
      throw ValidationError(std::string(c.sweep_alpha.empty() ? "physics.alpha" : "sweep.alpha") +
                            ": mode " + std::string(to_string(c.mode)) + " needs alpha < 1.25, got " +
                            format_real(a));
}

RunStatus simulate_one(const ExperimentConfig& c, Combo combo, const fs::path& dir, const std::string& id) {
  RunStatus status{id, combo.alpha, combo.beta, true, {}};
  SolverConfig sc = c.solver;
  sc.params.alpha = combo.alpha;
  sc.params.beta = combo.beta;
  sc.validate();

  json summary;
  summary["config"] = config_json(c);
  summary["run"] = {{"id", id}, {"alpha", combo.alpha}, {"beta", combo.beta}, {"nu", sc.params.nu}};
  if (auto w = sc.params.warning()) summary["warning"] = *w;

  const SpectralVectorField u0 = make_initial_data(c.initial_kind, sc.grid, c.seed, c.amplitude);
  TrajectoryRecord record;
  std::optional<LedgerReport> ledger;
  try {
    if (c.ledger) {
      LedgerRun run = simulate_with_ledger(u0, sc);
      ledger = w_inequality_check(run, sc.params, c.ledger_prefactor);
      record = std::move(run.record);
    } else {
      record = simulate(u0, sc);
    }
    summary["status"] = "ok";
  } catch (const SimulationAborted& e) {
    record = e.partial();
    status.ok = false;
    status.error = e.what();
    summary["status"] = "aborted";
    summary["error"] = e.what();
    summary["aborted_at"] = e.time();
  }

  summary["steps"] = record.steps;
  summary["samples"] = record.norms.size();
  std::optional<double> theory;
  if (sc.params.in_theorem_range()) theory = -exponent_thm_gnse(combo.alpha, combo.beta);
  try {
    summary["fit"] = fit_json(fit_power_law(record.norms.times, record.norms.l2_sq, c.fit_window, theory));
  } catch (const ValidationError& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  summary["ledger"] = ledger ? ledger_json(*ledger) : json(nullptr);

  if (record.norms.size() > 0) export_norm_series(record.norms, (dir / "norms.csv").string());
  write_json(dir / "summary.json", summary);
  return status;
}

ExperimentResult run_simulate(const ExperimentConfig& c, unsigned workers, const fs::path& root) {
  const auto grid = sweep_grid(c);
  for (const auto& g : grid) {
    SolverConfig sc = c.solver;
    sc.params.alpha = g.alpha;
    sc.params.beta = g.beta;
    sc.validate();
  }
  ExperimentResult result;
  result.runs.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) make_dir(root / run_id(i));
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const std::string id = run_id(i);
    result.runs[i] = simulate_one(c, grid[i], root / id, id);
  });
  return result;
}

ExperimentResult run_semigroup(const ExperimentConfig& c, unsigned workers, const fs::path& root) {
  const auto alphas = c.alphas();
  std::vector<SemigroupDecayRecord> recs(alphas.size());
  ExperimentResult result;
  result.runs.resize(alphas.size());
  const RadialInitialData data = gaussian_data();
  parallel_for(alphas.size(), workers, [&](std::size_t i) {
    RunStatus& s = result.runs[i];
    s.id = run_id(i);
    s.alpha = alphas[i];
    s.beta = 0.0;
    try {
      recs[i] = semigroup_rate_fit(data, alphas[i], c.fit_window, c.fit_samples);
    } catch (const NumericalError& e) {
      s.ok = false;
      s.error = e.what();
    }
  });

  std::string csv = "alpha,t,l2_sq\n";
  json fits = json::array();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    json f;
    f["alpha"] = alphas[i];
    if (!result.runs[i].ok) {
      f["status"] = "failed";
      f["error"] = result.runs[i].error;
      fits.push_back(f);
      continue;
    }
    const auto& r = recs[i];
    for (std::size_t k = 0; k < r.times.size(); ++k)
      csv += format_real(alphas[i]) + "," + format_real(r.times[k]) + "," + format_real(r.l2_sq[k]) + "\n";
    f["status"] = "ok";
    f["data"] = data.label;
    f["fitted_exponent"] = r.fitted_exponent;
    f["theory_exponent"] = r.theory_exponent;
    f["relative_error"] = std::abs(r.fitted_exponent - r.theory_exponent) / std::abs(r.theory_exponent);
    f["residual"] = r.residual;
    f["flagged"] = r.flagged;
    fits.push_back(f);
  }
  write_text(root / "semigroup.csv", csv);
  json summary;
  summary["config"] = config_json(c);
  summary["window"] = {c.fit_window.t_lo, c.fit_window.t_hi};
  summary["fits"] = fits;
  write_json(root / "summary.json", summary);
  return result;
}

ExperimentResult run_exponent_table(const ExperimentConfig& c, const fs::path& root) {
  require_theorem_range(c);
  ExperimentResult result;
  std::string csv = "alpha,beta,exponent\n";
  json rows = json::array();
  for (const auto& g : sweep_grid(c)) {
    const double e = exponent_thm_gnse(g.alpha, g.beta);
    csv += format_real(g.alpha) + "," + format_real(g.beta) + "," + format_real(e) + "\n";
    rows.push_back({{"alpha", g.alpha}, {"beta", g.beta}, {"exponent", e}});
    result.runs.push_back({run_id(result.runs.size()), g.alpha, g.beta, true, {}});
  }
  write_text(root / "exponents.csv", csv);
  json summary;
  summary["config"] = config_json(c);
  summary["rows"] = rows;
  write_json(root / "summary.json", summary);
  return result;
}

ExperimentResult run_bootstrap_trace(const ExperimentConfig& c, const fs::path& root) {
  require_theorem_range(c);
  ExperimentResult result;
  std::string csv = "alpha,beta,iteration,ceiling,dissipation_term,damping_term,w_exponent,u_exponent\n";
  json traces = json::array();
  for (const auto& g : sweep_grid(c)) {
    RunStatus s{run_id(result.runs.size()), g.alpha, g.beta, true, {}};
    json t;
    t["alpha"] = g.alpha;
    t["beta"] = g.beta;
    try {
      const auto steps = bootstrap_exponents(g.alpha, g.beta);
      for (const auto& st : steps)
        csv += format_real(g.alpha) + "," + format_real(g.beta) + "," + std::to_string(st.iteration) + "," +
               format_real(st.ceiling) + "," + format_real(st.dissipation_term) + "," +
               format_real(st.damping_term) + "," + format_real(st.w_exponent) + "," +
               format_real(st.u_exponent) + "\n";
      t["iterations"] = steps.size();
      t["fixed_point"] = steps.back().u_exponent;
      t["theory_exponent"] = exponent_thm_gnse(g.alpha, g.beta);
    } catch (const NumericalError& e) {
      s.ok = false;
      s.error = e.what();
      t["error"] = e.what();
    }
    traces.push_back(t);
    result.runs.push_back(s);
  }
  write_text(root / "bootstrap.csv", csv);
  json summary;
  summary["config"] = config_json(c);
  summary["traces"] = traces;
  write_json(root / "summary.json", summary);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers) {
  if (workers == 0) throw ValidationError("workers: must be at least 1");
  // Round trip catches configs assembled in code that bypass parse_config.
  const ExperimentConfig resolved = parse_config(to_flat(config));
  const fs::path root(resolved.output_dir);
  make_dir(root);

  ExperimentResult result;
  switch (resolved.mode) {
    case ExperimentMode::simulate: result = run_simulate(resolved, workers, root); break;
    case ExperimentMode::semigroup_verify: result = run_semigroup(resolved, workers, root); break;
    case ExperimentMode::exponent_table: result = run_exponent_table(resolved, root); break;
    case ExperimentMode::bootstrap_trace: result = run_bootstrap_trace(resolved, root); break;
  }

  json index;
  index["config"] = config_json(resolved);
  index["mode"] = std::string(to_string(resolved.mode));
  json runs = json::array();
  for (const auto& r : result.runs) {
    json j{{"id", r.id}, {"alpha", r.alpha}, {"beta", r.beta}, {"status", r.ok ? "ok" : "failed"}};
    if (resolved.mode == ExperimentMode::simulate) j["dir"] = r.id;
    if (!r.ok) j["error"] = r.error;
    runs.push_back(j);
  }
  index["runs"] = runs;
  index["exit_code"] = result.exit_code();
  result.index_path = (root / "index.json").string();
  write_json(root / "index.json", index);
  return result;
}

void export_norm_series(const NormSeries& s, const std::string& path) {
  s.validate();
  if (s.size() == 0) throw ValidationError("export_norm_series: empty series");
  std::string out = std::string(kNormHeader) + "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_real(s.times[i]) + "," + format_real(s.l2_sq[i]) + "," + format_real(s.h_alpha_sq[i]) + "," +
           format_real(s.l_beta_plus_1_pow[i]) + ",";
    if (s.has_w()) out += format_real(s.w_l2_sq[i]);
    out += "\n";
  }
  write_text(path, out);
}

void export_norm_series(const TrajectoryRecord& record, const std::string& path) {
  export_norm_series(record.norms, path);
}

NormSeries import_norm_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kNormHeader)
    throw ValidationError("import_norm_series: '" + path + "' lacks the expected header");
  NormSeries s;
  std::size_t with_w = 0, rows = 0;
  std::size_t lineno = 1;
  auto number = [&](const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
      throw ValidationError("import_norm_series: bad value '" + cell + "' on line " + std::to_string(lineno));
    return v;
  };
  std::vector<double> w;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 5)
      throw ValidationError("import_norm_series: expected 5 columns on line " + std::to_string(lineno));
    s.times.push_back(number(cells[0]));
    s.l2_sq.push_back(number(cells[1]));
    s.h_alpha_sq.push_back(number(cells[2]));
    s.l_beta_plus_1_pow.push_back(number(cells[3]));
    if (!cells[4].empty()) {
      w.push_back(number(cells[4]));
      ++with_w;
    }
    ++rows;
  }
  if (with_w != 0 && with_w != rows)
    throw ValidationError("import_norm_series: w column is only partially filled");
  s.w_l2_sq = std::move(w);
  s.validate();
  return s;
}

}  // namespace dampns
