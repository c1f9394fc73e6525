#pragma once

// A-posteriori checks of the energy structure along trajectories: the
// u-energy law d/dt ||u||^2 + 2 ||L^a u||^2 + 2 nu ||u||^{b+1}_{b+1} = 0 and
// the differential inequality for w = u - v, v the linear evolution of u0:
//   d/dt ||w||^2 + 2 ||L^a w||^2 + ||u||^{b+1}_{b+1}
//       <= ||grad v||_inf ||u||^2 + C ||v||^{b+1}_{b+1}.

#include <limits>
#include <vector>

#include "dampns/solver.hpp"

namespace dampns {

// w = u - evolve_box(u0, alpha, t).
SpectralVectorField difference_field(const SpectralVectorField& u, const SpectralVectorField& u0, double alpha,
                                     double t);

struct DifferenceSample {
  double t = 0.0;
  double w_l2_sq = 0.0;
  double w_h_alpha_sq = 0.0;
  double u_l2_sq = 0.0;
  double u_l_beta1_pow = 0.0;
  double v_l_beta1_pow = 0.0;
  double grad_v_linf = 0.0;
};

DifferenceSample measure_difference(const SpectralVectorField& u, const SpectralVectorField& u0,
                                    const PhysicalParams& params, double t);

// Trajectory plus the w-diagnostics at every recorded time; fills
// record.norms.w_l2_sq.
struct LedgerRun {
  TrajectoryRecord record;
  std::vector<DifferenceSample> difference;
};

LedgerRun simulate_with_ledger(const SpectralVectorField& u0, const SolverConfig& config);

// Per recorded interval: (E_{i+1} - E_i)/dt + mean of 2 ||L^a u||^2 + 2 nu ||u||^{b+1}_{b+1}
// over the endpoints.
std::vector<double> u_energy_residual(const TrajectoryRecord& record, const PhysicalParams& params);

struct Violation {
  double t = 0.0;
  double margin = 0.0;
};

struct LedgerReport {
  std::vector<double> times;  // interval midpoints
  std::vector<double> u_balance_residual;
  std::vector<double> w_inequality_margin;  // RHS - LHS
  std::vector<Violation> violations;        // margin < -tolerance
  double prefactor = 0.0;
  // Smallest C giving no negative margin (0 when none is needed, +inf when
  // no finite C suffices).
  double min_sufficient_prefactor = 0.0;
};

inline constexpr double kDefaultLedgerPrefactor = 4.0;
inline constexpr double kDefaultLedgerTolerance = 1e-10;

LedgerReport w_inequality_check(const LedgerRun& run, const PhysicalParams& params,
                                double prefactor = kDefaultLedgerPrefactor,
                                double tolerance = kDefaultLedgerTolerance);

// Same check from a record holding a snapshot at every recorded time
// (config.snapshot_every = 1); u0 must be the record's initial state.
LedgerReport w_inequality_check(const TrajectoryRecord& record, const SpectralVectorField& u0,
                                const PhysicalParams& params, double prefactor = kDefaultLedgerPrefactor,
                                double tolerance = kDefaultLedgerTolerance);

// <dealias((u.grad)u), u>: vanishes for divergence-free u inside the
// dealiased band.
double advection_energy_transfer(const SpectralVectorField& u);

// <w, f - P f>: the work done by the gradient part removed by projection.
double gradient_work(const SpectralVectorField& w, const SpectralVectorField& f);

}  // namespace dampns
