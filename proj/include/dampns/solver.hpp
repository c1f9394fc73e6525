#pragma once

// Time integration of
//   du/dt + P[(u.grad)u] + (-Delta)^alpha u + nu P[|u|^(beta-1) u] = 0
// on the periodic box. The dissipative part is integrated exactly; the
// advection and damping terms go through the explicit stages.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "dampns/decay_analysis.hpp"
#include "dampns/errors.hpp"
#include "dampns/spectral_core.hpp"

namespace dampns {

enum class Integrator { etdrk2, imex_euler };
enum class ConvectionForm { convective, skew_symmetric };

std::string_view to_string(Integrator i);
std::string_view to_string(ConvectionForm f);
Integrator integrator_from_string(std::string_view s);
ConvectionForm convection_form_from_string(std::string_view s);

struct SolverConfig {
  GridSpec grid;
  PhysicalParams params;
  double dt = 0.01;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  double record_every = 0.1;
  Integrator integrator = Integrator::etdrk2;
  // Shrink dt to cfl_safety * dx / max|u| when needed. Otherwise a step
  // whose Courant number exceeds cfl_safety aborts the run.
  bool adaptive = false;
  bool advection = true;  // false together with nu = 0 leaves the linear equation
  ConvectionForm convection = ConvectionForm::convective;
  // Keep a snapshot at every k-th recorded time (0: none).
  std::size_t snapshot_every = 0;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct Snapshot {
  double t = 0.0;
  SpectralVectorField field;
};

struct TrajectoryRecord {
  SpectralVectorField initial;  // the projected initial state actually integrated
  NormSeries norms;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;

  const std::vector<double>& times() const { return norms.times; }
};

// Raised when a run aborts; carries everything recorded up to the failure.
class SimulationAborted : public NumericalError {
 public:
  SimulationAborted(const std::string& what, double time, TrajectoryRecord partial)
      : NumericalError(what), time_(time), partial_(std::move(partial)) {}
  double time() const noexcept { return time_; }
  const TrajectoryRecord& partial() const noexcept { return partial_; }

 private:
  double time_;
  TrajectoryRecord partial_;
};

struct NonlinearOptions {
  bool advection = true;
  ConvectionForm convection = ConvectionForm::convective;
};

// -P[dealias((u.grad)u)] - nu P[dealias(|u|^(beta-1) u)], products taken
// pointwise on the grid. Throws BlowUpError on non-finite values.
SpectralVectorField nonlinear_rhs(const SpectralVectorField& u, const PhysicalParams& params,
                                  const NonlinearOptions& options = {}, double time = 0.0);

// One step of size config.dt followed by re-projection.
SpectralVectorField step(const SpectralVectorField& u, const SolverConfig& config);

// Called with every recorded state (index, time, field).
using RecordHook = std::function<void(std::size_t, double, const SpectralVectorField&)>;

TrajectoryRecord simulate(const SpectralVectorField& u0, const SolverConfig& config, const RecordHook& hook = {});

enum class InitialKind { taylor_green, low_freq_random, gaussian_modulated };
std::string_view to_string(InitialKind k);
InitialKind initial_kind_from_string(std::string_view s);

// Divergence-free, conjugate-symmetric initial velocity. For the random
// kinds `amplitude` is the RMS speed sqrt(||u||^2 / |box|); Taylor-Green
// uses it as the peak coefficient amplitude.
SpectralVectorField make_initial_data(InitialKind kind, const GridSpec& grid, std::uint64_t seed, double amplitude);

}  // namespace dampns
