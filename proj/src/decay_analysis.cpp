#include "dampns/decay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dampns/detail/linear_fit.hpp"
#include "dampns/errors.hpp"

namespace dampns {

namespace {

// The two branches of the damped-system exponent; shared so that the
// theorem value and the bootstrap fixed point are computed identically.
double heat_branch(double alpha) { return 3.0 / (2.0 * alpha); }
double damping_branch(double alpha, double beta) { return (3.0 * beta - 2.0 * alpha) / (2.0 * alpha); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

void NormSeries::validate() const {
  const std::size_t n = times.size();
  require(l2_sq.size() == n && h_alpha_sq.size() == n && l_beta_plus_1_pow.size() == n,
          "NormSeries: column lengths differ");
  require(w_l2_sq.empty() || w_l2_sq.size() == n, "NormSeries: w column length differs");
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) require(times[i] > times[i - 1], "NormSeries: times must be strictly increasing");
    require(l2_sq[i] >= 0.0 && h_alpha_sq[i] >= 0.0 && l_beta_plus_1_pow[i] >= 0.0,
            "NormSeries: entries must be non-negative");
    if (!w_l2_sq.empty()) require(w_l2_sq[i] >= 0.0, "NormSeries: entries must be non-negative");
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::faster: return "faster";
    case Verdict::slower: return "slower";
    case Verdict::unreliable: return "unreliable";
  }
  return "unreliable";
}

double exponent_thm_nse(double beta) {
  require(beta >= 1.0, "exponent_thm_nse: requires beta >= 1");
  return std::min(1.5, (3.0 * beta - 2.0) / 2.0);
}

double exponent_thm_gnse(double alpha, double beta) {
  require(alpha > 0.0 && alpha < 1.25, "exponent_thm_gnse: requires 0 < alpha < 5/4");
  require(beta >= 1.0, "exponent_thm_gnse: requires beta >= 1");
  return std::min(heat_branch(alpha), damping_branch(alpha, beta));
}

std::string_view to_string(CatalogEntry e) {
  switch (e) {
    case CatalogEntry::cai_lei: return "cai_lei";
    case CatalogEntry::jia_zhang_dong: return "jia_zhang_dong";
    case CatalogEntry::jiang: return "jiang";
    case CatalogEntry::jiu_yu: return "jiu_yu";
    case CatalogEntry::duan: return "duan";
  }
  return "";
}

CatalogEntry catalog_entry_from_string(std::string_view s) {
  for (auto e : {CatalogEntry::cai_lei, CatalogEntry::jia_zhang_dong, CatalogEntry::jiang, CatalogEntry::jiu_yu,
                 CatalogEntry::duan})
    if (to_string(e) == s) return e;
  throw ValidationError("unknown catalog entry '" + std::string(s) + "'");
}

double exponent_catalog(CatalogEntry entry, const CatalogParams& params) {
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw ValidationError(std::string(to_string(entry)) + ": parameter " + name + " is required");
    return *v;
  };
  switch (entry) {
    case CatalogEntry::cai_lei: {
      const double beta = need(params.beta, "beta");
      require(beta > 7.0 / 3.0, "cai_lei: requires beta > 7/3");
      return std::min(0.5, (3.0 * beta - 7.0) / (2.0 * (beta + 1.0)));
    }
    case CatalogEntry::jia_zhang_dong: {
      const double beta = need(params.beta, "beta");
      const double mu = need(params.mu, "mu");
      require(beta >= 10.0 / 3.0, "jia_zhang_dong: requires beta >= 10/3");
      require(mu > 0.0, "jia_zhang_dong: requires mu > 0");
      return std::min(mu, 1.5);
    }
    case CatalogEntry::jiang: {
      const double beta = need(params.beta, "beta");
      require(beta >= 3.0, "jiang: requires beta >= 3");
      return 1.5;
    }
    case CatalogEntry::jiu_yu: {
      const double alpha = need(params.alpha, "alpha");
      const double p = need(params.p, "p");
      require(alpha > 0.0 && alpha < 1.25, "jiu_yu: requires 0 < alpha < 5/4");
      require(p >= std::max(1.0, 1.0 / (3.0 - 2.0 * alpha)) && p < 2.0,
              "jiu_yu: requires max{1, 1/(3 - 2 alpha)} <= p < 2");
      return 3.0 / (2.0 * alpha) * (2.0 / p - 1.0);
    }
    case CatalogEntry::duan: {
      const double alpha = need(params.alpha, "alpha");
      require(alpha > 0.0 && alpha < 2.0, "duan: requires 0 < alpha < 2");
      return 3.0 / (2.0 * alpha);
    }
  }
  throw ValidationError("exponent_catalog: unknown entry");
}

std::vector<BootstrapStep> bootstrap_exponents(double alpha, double beta, int max_iter) {
  require(alpha > 0.0 && alpha < 1.25, "bootstrap_exponents: requires 0 < alpha < 5/4");
  require(beta >= 1.0, "bootstrap_exponents: requires beta >= 1");
  require(max_iter >= 1, "bootstrap_exponents: max_iter must be positive");

  const double ceiling = heat_branch(alpha);
  const double gain = (2.0 - alpha) / alpha;
  const double damping = damping_branch(alpha, beta);

  std::vector<BootstrapStep> steps;
  double u_prev = 0.0;  // only ||u||_{L2} <= C is known at the start
  for (int k = 1; k <= max_iter; ++k) {
    BootstrapStep s;
    s.iteration = k;
    s.ceiling = ceiling;
    s.dissipation_term = gain + u_prev;
    s.damping_term = damping;
    s.w_exponent = std::min({s.ceiling, s.dissipation_term, s.damping_term});
    s.u_exponent = std::min(ceiling, s.w_exponent);
    steps.push_back(s);
    if (k > 1 && s.u_exponent == u_prev) return steps;
    u_prev = s.u_exponent;
  }
  std::ostringstream os;
  os << "bootstrap_exponents: no stationary exponent within " << max_iter << " iterations (alpha=" << alpha
     << ", beta=" << beta << ")";
  throw NumericalError(os.str());
}

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values, FitWindow window,
                       std::optional<double> theory_exponent, const FitOptions& options) {
  require(times.size() == values.size(), "fit_power_law: times and values differ in length");
  require(window.t_hi > window.t_lo && window.t_lo >= 0.0, "fit_power_law: invalid window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.t_lo || times[i] > window.t_hi) continue;
    require(values[i] > 0.0, "fit_power_law: values must be positive");
    x.push_back(std::log1p(times[i]));
    y.push_back(std::log(values[i]));
  }
  require(x.size() >= 10, "fit_power_law: at least 10 samples inside the window are required");

  const auto line = detail::least_squares(x, y);
  DecayFit fit;
  fit.exponent = line.slope;
  fit.window = window;
  fit.residual = line.rms;
  fit.theory_exponent = theory_exponent;
  fit.samples = x.size();

  const bool wide = window.t_lo > 0.0 ? window.t_hi / window.t_lo >= options.min_window_ratio : true;
  if (!theory_exponent || !wide || fit.residual > options.residual_threshold) {
    fit.verdict = Verdict::unreliable;
  } else {
    const double tol = options.relative_tolerance * std::abs(*theory_exponent);
    if (std::abs(fit.exponent - *theory_exponent) <= tol) fit.verdict = Verdict::consistent;
    else if (fit.exponent < *theory_exponent) fit.verdict = Verdict::faster;
    else fit.verdict = Verdict::slower;
  }
  return fit;
}

}  // namespace dampns
