#pragma once

// Decay-exponent algebra for the damped (generalized) Navier-Stokes system
// and power-law fitting of measured norm series. Exponents are the decay
// powers sigma in ||u||^2_{L2} <= C (1 + t)^-sigma (positive numbers).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dampns/fractional_heat.hpp"

namespace dampns {

struct NormSeries {
  std::vector<double> times;
  std::vector<double> l2_sq;
  std::vector<double> h_alpha_sq;
  std::vector<double> l_beta_plus_1_pow;
  std::vector<double> w_l2_sq;  // empty when not tracked

  std::size_t size() const { return times.size(); }
  bool has_w() const { return !w_l2_sq.empty(); }
  // Throws ValidationError on length mismatch, negative entries or
  // non-increasing times.
  void validate() const;
};

enum class Verdict { consistent, faster, slower, unreliable };
std::string_view to_string(Verdict v);

struct DecayFit {
  double exponent = 0.0;  // fitted slope of log(value) vs log(1 + t); negative for decay
  FitWindow window;
  double residual = 0.0;  // RMS misfit in log space
  std::optional<double> theory_exponent;  // slope predicted by theory (negative)
  Verdict verdict = Verdict::unreliable;
  std::size_t samples = 0;
};

struct FitOptions {
  double residual_threshold = 0.05;
  // Consistency band as a fraction of |theory_exponent|.
  double relative_tolerance = 0.10;
  // Verdicts need t_hi / t_lo of at least this much.
  double min_window_ratio = 10.0;
};

// min{3/2, (3 beta - 2)/2}, beta >= 1.
double exponent_thm_nse(double beta);
// min{3/(2 alpha), (3 beta - 2 alpha)/(2 alpha)}, 0 < alpha < 5/4, beta >= 1.
double exponent_thm_gnse(double alpha, double beta);

enum class CatalogEntry { cai_lei, jia_zhang_dong, jiang, jiu_yu, duan };
std::string_view to_string(CatalogEntry e);
CatalogEntry catalog_entry_from_string(std::string_view s);

struct CatalogParams {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> mu;  // exponent of the linear heat decay assumption
  std::optional<double> p;   // integrability of the initial datum
};

// Earlier decay results, each with its own hypotheses; out-of-range
// parameters throw ValidationError quoting the hypothesis.
double exponent_catalog(CatalogEntry entry, const CatalogParams& params);

struct BootstrapStep {
  int iteration = 0;
  // Candidate exponents entering the w bound: Fourier-splitting ceiling,
  // dissipation-gain term, damping term.
  double ceiling = 0.0;
  double dissipation_term = 0.0;
  double damping_term = 0.0;
  double w_exponent = 0.0;
  double u_exponent = 0.0;
};

// Runs the exponent bootstrap from the bounded-energy start e_u = 0 until
// the u-exponent is stationary. The last step's u_exponent equals
// exponent_thm_gnse(alpha, beta). Throws NumericalError past max_iter.
std::vector<BootstrapStep> bootstrap_exponents(double alpha, double beta, int max_iter = 10);

// Least squares of log(value) against log(1 + t) over samples in the window.
DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values, FitWindow window,
                       std::optional<double> theory_exponent = std::nullopt, const FitOptions& options = {});

}  // namespace dampns
