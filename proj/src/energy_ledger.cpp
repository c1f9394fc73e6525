#include "dampns/energy_ledger.hpp"

#include <algorithm>
#include <cmath>

#include "dampns/fractional_heat.hpp"

namespace dampns {

SpectralVectorField difference_field(const SpectralVectorField& u, const SpectralVectorField& u0, double alpha,
                                     double t) {
  if (!(u.grid() == u0.grid())) throw ValidationError("difference_field: u and u0 live on different grids");
  return u - evolve_box(u0, alpha, t);
}

DifferenceSample measure_difference(const SpectralVectorField& u, const SpectralVectorField& u0,
                                    const PhysicalParams& params, double t) {
  if (!(u.grid() == u0.grid())) throw ValidationError("measure_difference: u and u0 live on different grids");
  const SpectralVectorField v = evolve_box(u0, params.alpha, t);
  const SpectralVectorField w = u - v;
  const double p = params.beta + 1.0;
  DifferenceSample s;
  s.t = t;
  s.w_l2_sq = l2_squared(w);
  s.w_h_alpha_sq = h_alpha_squared(w, params.alpha);
  s.u_l2_sq = l2_squared(u);
  s.u_l_beta1_pow = lp_power(to_physical(u), p);
  s.v_l_beta1_pow = lp_power(to_physical(v), p);
  s.grad_v_linf = gradient_linf(v);
  return s;
}

LedgerRun simulate_with_ledger(const SpectralVectorField& u0, const SolverConfig& config) {
  LedgerRun run;
  SpectralVectorField reference;
  auto hook = [&](std::size_t index, double t, const SpectralVectorField& u) {
    // The first recorded state is the projected initial datum.
    if (index == 0) reference = u;
    run.difference.push_back(measure_difference(u, reference, config.params, t));
  };
  run.record = simulate(u0, config, hook);
  run.record.norms.w_l2_sq.clear();
  for (const auto& s : run.difference) run.record.norms.w_l2_sq.push_back(s.w_l2_sq);
  return run;
}

std::vector<double> u_energy_residual(const TrajectoryRecord& record, const PhysicalParams& params) {
  const NormSeries& s = record.norms;
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double dt = s.times[i + 1] - s.times[i];
    const double d0 = 2.0 * s.h_alpha_sq[i] + 2.0 * params.nu * s.l_beta_plus_1_pow[i];
    const double d1 = 2.0 * s.h_alpha_sq[i + 1] + 2.0 * params.nu * s.l_beta_plus_1_pow[i + 1];
    out.push_back((s.l2_sq[i + 1] - s.l2_sq[i]) / dt + 0.5 * (d0 + d1));
  }
  return out;
}

namespace {

LedgerReport check_samples(const TrajectoryRecord& record, const std::vector<DifferenceSample>& samples,
                           const PhysicalParams& params, double prefactor, double tolerance) {
  if (!(prefactor > 0.0)) throw ValidationError("w_inequality_check: prefactor must be positive");
  if (samples.size() != record.norms.size())
    throw ValidationError("w_inequality_check: difference samples do not match the record");

  LedgerReport rep;
  rep.prefactor = prefactor;
  rep.u_balance_residual = u_energy_residual(record, params);
  double needed = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double dt = b.t - a.t;
    const double lhs = (b.w_l2_sq - a.w_l2_sq) / dt + (a.w_h_alpha_sq + b.w_h_alpha_sq) +
                       0.5 * (a.u_l_beta1_pow + b.u_l_beta1_pow);
    const double transport = 0.5 * (a.grad_v_linf * a.u_l2_sq + b.grad_v_linf * b.u_l2_sq);
    const double forcing = 0.5 * (a.v_l_beta1_pow + b.v_l_beta1_pow);
    const double margin = transport + prefactor * forcing - lhs;
    const double tm = 0.5 * (a.t + b.t);
    rep.times.push_back(tm);
    rep.w_inequality_margin.push_back(margin);
    if (margin < -tolerance) rep.violations.push_back({tm, margin});
    const double excess = lhs - transport - tolerance;
    if (excess > 0.0)
      needed = std::max(needed, forcing > 0.0 ? excess / forcing : std::numeric_limits<double>::infinity());
  }
  rep.min_sufficient_prefactor = needed;
  return rep;
}

}  // namespace

LedgerReport w_inequality_check(const LedgerRun& run, const PhysicalParams& params, double prefactor,
                                double tolerance) {
  return check_samples(run.record, run.difference, params, prefactor, tolerance);
}

LedgerReport w_inequality_check(const TrajectoryRecord& record, const SpectralVectorField& u0,
                                const PhysicalParams& params, double prefactor, double tolerance) {
  if (record.snapshots.size() != record.norms.size())
    throw ValidationError("w_inequality_check: record needs a snapshot at every recorded time");
  std::vector<DifferenceSample> samples;
  for (const auto& snap : record.snapshots) samples.push_back(measure_difference(snap.field, u0, params, snap.t));
  return check_samples(record, samples, params, prefactor, tolerance);
}

double advection_energy_transfer(const SpectralVectorField& u) {
  const PhysicalParams inviscid{1.0, 1.0, 0.0};
  return -inner_product(nonlinear_rhs(u, inviscid), u);
}

double gradient_work(const SpectralVectorField& w, const SpectralVectorField& f) {
  return inner_product(w, f - leray_project(f));
}

}  // namespace dampns
