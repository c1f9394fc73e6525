#include "dampns/fractional_heat.hpp"

#include <algorithm>
#include <cmath>

#include "dampns/detail/linear_fit.hpp"
#include "dampns/detail/modes.hpp"
#include "dampns/errors.hpp"
#include "dampns/quadrature.hpp"

namespace dampns {

SpectralVectorField evolve_box(const SpectralVectorField& field, double alpha, double t) {
  if (!(t >= 0.0)) throw ValidationError("evolve_box: t must be non-negative");
  if (!(alpha > 0.0)) throw ValidationError("evolve_box: alpha must be positive");
  if (t == 0.0) return field;
  SpectralVectorField out = field;
  detail::for_each_mode(field.grid(), [&](const detail::Mode& m) {
    const double factor = m.k2 == 0.0 ? 1.0 : std::exp(-std::pow(m.k2, alpha) * t);
    for (int c = 0; c < out.components(); ++c) out.component(c)[m.index] *= factor;
  });
  return out;
}

RadialInitialData gaussian_data() {
  RadialInitialData d;
  const double amp = std::pow(2.0 * kPi, 1.5);
  d.profile = [amp](double r) { return amp * std::exp(-0.5 * r * r); };
  d.label = "gaussian";
  d.l1_like = true;
  d.support = 1.0;
  return d;
}

RadialInitialData annulus_data() {
  RadialInitialData d;
  d.profile = [](double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double s = std::sin(kPi * (r - 1.0));
    return s * s;
  };
  d.label = "annulus";
  d.l1_like = false;
  d.support = 2.0;
  return d;
}

double l2_sq_r3(const RadialInitialData& data, double alpha, double t) {
  if (!(alpha > 0.0)) throw ValidationError("l2_sq_r3: alpha must be positive");
  if (!(t >= 0.0)) throw ValidationError("l2_sq_r3: t must be non-negative");
  if (!data.profile) throw ValidationError("l2_sq_r3: missing profile");
  const double two_alpha = 2.0 * alpha;
  auto integrand = [&](double r) {
    const double p = data.profile(r);
    const double damp = t == 0.0 ? 1.0 : std::exp(-2.0 * std::pow(r, two_alpha) * t);
    return damp * p * p * r * r;
  };
  // Width of the heat factor exp(-2 r^(2 alpha) t).
  double scale = data.support;
  if (t > 0.0) scale = std::min(scale, std::pow(1.0 / (2.0 * t), 1.0 / two_alpha));
  if (data.l1_like) scale /= 8.0;
  // Mass of annulus-type data sits near its support, not at the heat scale.
  else scale = std::min(scale, 0.125 * data.support);
  const auto q = integrate_half_line(integrand, scale, data.support);
  return q.value / (2.0 * kPi * kPi);
}

SemigroupDecayRecord semigroup_rate_fit(const RadialInitialData& data, double alpha, FitWindow window,
                                        int samples) {
  if (!(alpha > 0.0)) throw ValidationError("semigroup_rate_fit: alpha must be positive");
  if (!(window.t_lo >= 1.0)) throw ValidationError("semigroup_rate_fit: window t_lo must be >= 1");
  if (!(window.t_hi >= 100.0 * window.t_lo))
    throw ValidationError("semigroup_rate_fit: window must span t_hi / t_lo >= 100");
  if (samples < 20) throw ValidationError("semigroup_rate_fit: at least 20 samples required");

  SemigroupDecayRecord rec;
  rec.alpha = alpha;
  rec.l1_like = data.l1_like;
  rec.theory_exponent = -3.0 / (2.0 * alpha);
  const double ratio = std::log(window.t_hi / window.t_lo);
  std::vector<double> lx, ly;
  for (int i = 0; i < samples; ++i) {
    const double t = window.t_lo * std::exp(ratio * i / (samples - 1));
    const double v = l2_sq_r3(data, alpha, t);
    if (!(v > 0.0)) throw NumericalError("semigroup_rate_fit: norm underflowed to zero inside the window");
    rec.times.push_back(t);
    rec.l2_sq.push_back(v);
    lx.push_back(std::log(t));
    ly.push_back(std::log(v));
  }
  const auto fit = detail::least_squares(lx, ly);
  rec.fitted_exponent = fit.slope;
  rec.residual = fit.rms;
  bool decreasing = true;
  for (std::size_t i = 1; i < rec.l2_sq.size(); ++i) decreasing = decreasing && rec.l2_sq[i] < rec.l2_sq[i - 1];
  rec.flagged = !data.l1_like || !decreasing || rec.residual > kSemigroupResidualThreshold;
  return rec;
}

double lq_bound_exponent(double alpha, double r, double q, double mu) {
  if (!(alpha > 0.0)) throw ValidationError("lq_bound_exponent: alpha must be positive");
  if (!(r >= 1.0)) throw ValidationError("lq_bound_exponent: r must be >= 1");
  if (r > q) throw ValidationError("lq_bound_exponent: requires r <= q");
  if (!(mu >= 0.0)) throw ValidationError("lq_bound_exponent: mu must be non-negative");
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return -mu / (2.0 * alpha) - 3.0 / (2.0 * alpha) * (1.0 / r - inv_q);
}

}  // namespace dampns
