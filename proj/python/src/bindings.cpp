#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "dampns/config.hpp"
#include "dampns/decay_analysis.hpp"
#include "dampns/errors.hpp"
#include "dampns/fractional_heat.hpp"
#include "dampns/harness.hpp"
#include "dampns/solver.hpp"

namespace py = pybind11;
using namespace dampns;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

RadialInitialData radial(const std::string& name) {
  if (name == "gaussian") return gaussian_data();
  if (name == "annulus") return annulus_data();
  throw ValidationError("data: expected gaussian or annulus, got '" + name + "'");
}

py::dict series_dict(const NormSeries& s) {
  py::dict d;
  d["t"] = to_array(s.times);
  d["l2_sq"] = to_array(s.l2_sq);
  d["h_alpha_sq"] = to_array(s.h_alpha_sq);
  d["l_beta1_pow"] = to_array(s.l_beta_plus_1_pow);
  d["w_l2_sq"] = s.has_w() ? py::object(to_array(s.w_l2_sq)) : py::none();
  return d;
}

py::dict fit_dict(const DecayFit& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["residual"] = f.residual;
  d["t_lo"] = f.window.t_lo;
  d["t_hi"] = f.window.t_hi;
  d["theory_exponent"] = f.theory_exponent ? py::object(py::float_(*f.theory_exponent)) : py::none();
  d["verdict"] = std::string(to_string(f.verdict));
  d["samples"] = f.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dampns, m) {
  m.doc() = "Damped generalized Navier-Stokes decay toolkit";

  // translators run newest first, so subclasses are registered after Error
  const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("exponent_thm_nse", &exponent_thm_nse, py::arg("beta"));
  m.def("exponent_thm_gnse", &exponent_thm_gnse, py::arg("alpha"), py::arg("beta"));
  m.def(
      "exponent_catalog",
      [](const std::string& entry, std::optional<double> alpha, std::optional<double> beta, std::optional<double> mu,
         std::optional<double> p) { return exponent_catalog(catalog_entry_from_string(entry), {alpha, beta, mu, p}); },
      py::arg("entry"), py::kw_only(), py::arg("alpha") = py::none(), py::arg("beta") = py::none(),
      py::arg("mu") = py::none(), py::arg("p") = py::none());

  m.def(
      "bootstrap_exponents",
      [](double alpha, double beta, int max_iter) {
        py::list out;
        for (const auto& s : bootstrap_exponents(alpha, beta, max_iter)) {
          py::dict d;
          d["iteration"] = s.iteration;
          d["ceiling"] = s.ceiling;
          d["dissipation_term"] = s.dissipation_term;
          d["damping_term"] = s.damping_term;
          d["w_exponent"] = s.w_exponent;
          d["u_exponent"] = s.u_exponent;
          out.append(d);
        }
        return out;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("max_iter") = 10);

  m.def(
      "l2_sq_r3", [](double alpha, double t, const std::string& data) { return l2_sq_r3(radial(data), alpha, t); },
      py::arg("alpha"), py::arg("t"), py::arg("data") = "gaussian");

  m.def(
      "semigroup_rate_fit",
      [](double alpha, double t_lo, double t_hi, int samples, const std::string& data) {
        const auto r = semigroup_rate_fit(radial(data), alpha, {t_lo, t_hi}, samples);
        py::dict d;
        d["alpha"] = r.alpha;
        d["t"] = to_array(r.times);
        d["l2_sq"] = to_array(r.l2_sq);
        d["fitted_exponent"] = r.fitted_exponent;
        d["theory_exponent"] = r.theory_exponent;
        d["residual"] = r.residual;
        d["flagged"] = r.flagged;
        return d;
      },
      py::arg("alpha"), py::arg("t_lo") = 100.0, py::arg("t_hi") = 1e4, py::arg("samples") = 40,
      py::arg("data") = "gaussian");

  m.def(
      "fit_power_law",
      [](const std::vector<double>& times, const std::vector<double>& values, double t_lo, double t_hi,
         std::optional<double> theory) { return fit_dict(fit_power_law(times, values, {t_lo, t_hi}, theory)); },
      py::arg("times"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"), py::arg("theory_exponent") = py::none());

  m.def(
      "simulate",
      [](int n, double box_length, double alpha, double beta, double nu, double dt, double t_end, double record_every,
         const std::string& initial, std::uint64_t seed, double amplitude, const std::string& integrator,
         bool adaptive, bool advection) {
        SolverConfig c;
        c.grid = {n, box_length, 3};
        c.params = {alpha, beta, nu};
        c.dt = dt;
        c.t_end = t_end;
        c.record_every = record_every;
        c.integrator = integrator_from_string(integrator);
        c.adaptive = adaptive;
        c.advection = advection;
        const auto u0 = make_initial_data(initial_kind_from_string(initial), c.grid, seed, amplitude);
        TrajectoryRecord rec;
        {
          py::gil_scoped_release release;
          rec = simulate(u0, c);
        }
        auto d = series_dict(rec.norms);
        d["steps"] = rec.steps;
        return d;
      },
      py::arg("n"), py::arg("box_length"), py::arg("alpha"), py::arg("beta"), py::arg("nu"), py::arg("dt"),
      py::arg("t_end"), py::kw_only(), py::arg("record_every") = 0.1, py::arg("initial") = "taylor_green",
      py::arg("seed") = 0, py::arg("amplitude") = 1.0, py::arg("integrator") = "etdrk2", py::arg("adaptive") = false,
      py::arg("advection") = true);

  m.def("read_config", &read_config_file, py::arg("path"));
  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def(
      "validate_config", [](const FlatConfig& flat) { return to_flat(parse_config(flat)); }, py::arg("config"));

  m.def(
      "run_experiment",
      [](const FlatConfig& flat, std::optional<std::string> output_dir, std::optional<unsigned> workers) {
        auto config = parse_config(flat);
        if (output_dir) config.output_dir = *output_dir;
        const unsigned w = resolve_workers(workers);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(config, w);
        }
        py::list runs;
        for (const auto& s : r.runs) {
          py::dict d;
          d["id"] = s.id;
          d["alpha"] = s.alpha;
          d["beta"] = s.beta;
          d["ok"] = s.ok;
          d["error"] = s.error;
          runs.append(d);
        }
        py::dict out;
        out["exit_code"] = r.exit_code();
        out["index_path"] = r.index_path;
        out["runs"] = runs;
        return out;
      },
      py::arg("config"), py::kw_only(), py::arg("output_dir") = py::none(), py::arg("workers") = py::none());

  m.def(
      "import_norm_series", [](const std::string& path) { return series_dict(import_norm_series(path)); },
      py::arg("path"));
}
