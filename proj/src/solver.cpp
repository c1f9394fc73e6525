#include "dampns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dampns/detail/modes.hpp"
#include "dampns/fft.hpp"

namespace dampns {

using detail::for_each_mode;
using detail::Mode;

std::string_view to_string(Integrator i) { return i == Integrator::etdrk2 ? "etdrk2" : "imex_euler"; }
std::string_view to_string(ConvectionForm f) {
  return f == ConvectionForm::convective ? "convective" : "skew_symmetric";
}

Integrator integrator_from_string(std::string_view s) {
  if (s == "etdrk2") return Integrator::etdrk2;
  if (s == "imex_euler") return Integrator::imex_euler;
  throw ValidationError("unknown integrator '" + std::string(s) + "' (expected etdrk2 or imex_euler)");
}

ConvectionForm convection_form_from_string(std::string_view s) {
  if (s == "convective") return ConvectionForm::convective;
  if (s == "skew_symmetric") return ConvectionForm::skew_symmetric;
  throw ValidationError("unknown convection form '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  grid.validate();
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("solver.dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("solver.t_end must be non-negative");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ValidationError("solver.cfl_safety must lie in (0, 1]");
  if (!(record_every >= dt * (1.0 - 1e-12))) throw ValidationError("solver.record_every must be >= solver.dt");
}

namespace {

// Evaluates the explicit terms; owns per-grid scratch space.
class NonlinearEvaluator {
 public:
  NonlinearEvaluator(const GridSpec& grid, const PhysicalParams& params, const NonlinearOptions& options)
      : grid_(grid), params_(params), options_(options), fft_(transform_for(grid)),
        dim_(grid.dim), points_(grid.points()) {
    deriv_k_.assign(static_cast<std::size_t>(dim_), std::vector<double>(points_));
    for_each_mode(grid, [&](const Mode& m) {
      for (int d = 0; d < dim_; ++d) deriv_k_[d][m.index] = 2 * m.j[d] == -grid.n ? 0.0 : m.k[d];
    });
  }

  bool active() const { return options_.advection || params_.nu > 0.0; }
  double last_max_speed() const { return last_speed_; }

  SpectralVectorField operator()(const SpectralVectorField& u, double time) {
    SpectralVectorField out(grid_);
    last_speed_ = 0.0;
    if (!active()) return out;

    PhysicalVectorField phys = to_physical(u);
    for (int c = 0; c < dim_; ++c)
      for (double v : phys.component(c))
        if (!std::isfinite(v)) throw BlowUpError(blow_up_message(time), time);
    last_speed_ = max_speed(phys);

    std::vector<cplx> scratch(points_);
    std::vector<double> work(points_);
    std::vector<cplx> hat(points_);
    std::vector<double> grad(points_);

    if (options_.advection) {
      // (u.grad) u_c accumulated on the grid.
      for (int c = 0; c < dim_; ++c) {
        std::fill(work.begin(), work.end(), 0.0);
        auto uc = u.component(c);
        for (int d = 0; d < dim_; ++d) {
          for (std::size_t i = 0; i < points_; ++i) scratch[i] = cplx(0.0, deriv_k_[d][i]) * uc[i];
          fft_.inverse(scratch, grad);
          auto ud = phys.component(d);
          for (std::size_t p = 0; p < points_; ++p) work[p] += ud[p] * grad[p];
        }
        fft_.forward(work, hat);
        auto oc = out.component(c);
        const double w = options_.convection == ConvectionForm::skew_symmetric ? 0.5 : 1.0;
        for (std::size_t i = 0; i < points_; ++i) oc[i] -= w * hat[i];
      }
      if (options_.convection == ConvectionForm::skew_symmetric) {
        // 1/2 div(u u) part.
        for (int c = 0; c < dim_; ++c) {
          auto oc = out.component(c);
          for (int d = 0; d < dim_; ++d) {
            auto a = phys.component(c);
            auto b = phys.component(d);
            for (std::size_t p = 0; p < points_; ++p) work[p] = a[p] * b[p];
            fft_.forward(work, hat);
            for (std::size_t i = 0; i < points_; ++i) oc[i] -= 0.5 * cplx(0.0, deriv_k_[d][i]) * hat[i];
          }
        }
      }
    }

    if (params_.nu > 0.0) {
      std::vector<double> weight(points_, 1.0);
      if (params_.beta != 1.0) {
        const double e = params_.beta - 1.0;
        for (std::size_t p = 0; p < points_; ++p) {
          double s = 0.0;
          for (int c = 0; c < dim_; ++c) s += phys.component(c)[p] * phys.component(c)[p];
          // |u|^(beta-1) u extends continuously by 0 at u = 0.
          weight[p] = s == 0.0 ? 0.0 : std::pow(std::sqrt(s), e);
        }
      }
      for (int c = 0; c < dim_; ++c) {
        auto uc = phys.component(c);
        for (std::size_t p = 0; p < points_; ++p) work[p] = weight[p] * uc[p];
        fft_.forward(work, hat);
        auto oc = out.component(c);
        for (std::size_t i = 0; i < points_; ++i) oc[i] -= params_.nu * hat[i];
      }
    }

    out = leray_project(dealias(out));
    if (!out.is_finite()) throw BlowUpError(blow_up_message(time), time);
    return out;
  }

 private:
  static std::string blow_up_message(double time) {
    std::ostringstream os;
    os << "non-finite velocity at t = " << time;
    return os.str();
  }

  GridSpec grid_;
  PhysicalParams params_;
  NonlinearOptions options_;
  FourierTransform& fft_;
  int dim_;
  std::size_t points_;
  std::vector<std::vector<double>> deriv_k_;
  double last_speed_ = 0.0;
};

// phi_1(z) = (e^z - 1)/z, phi_2(z) = (e^z - 1 - z)/z^2.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    double term = 0.5, sum = 0.5;
    for (int m = 3; m <= 10; ++m) {
      term *= z / m;
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

class Stepper {
 public:
  explicit Stepper(const SolverConfig& config)
      : config_(config),
        nonlinear_(config.grid, config.params, NonlinearOptions{config.advection, config.convection}) {
    rate_.resize(config.grid.points());
    for_each_mode(config.grid, [&](const Mode& m) {
      rate_[m.index] = m.k2 == 0.0 ? 0.0 : std::pow(m.k2, config.params.alpha);
    });
  }

  const NonlinearEvaluator& nonlinear() const { return nonlinear_; }

  // Explicit terms at the start of the step; also refreshes max|u|.
  SpectralVectorField begin(const SpectralVectorField& u, double t) { return nonlinear_(u, t); }

  SpectralVectorField finish(const SpectralVectorField& u, const SpectralVectorField& nu_start, double h, double t) {
    set_step(h);
    const int dim = config_.grid.dim;
    const std::size_t pts = config_.grid.points();
    SpectralVectorField out(config_.grid);
    if (config_.integrator == Integrator::imex_euler) {
      for (int c = 0; c < dim; ++c) {
        auto o = out.component(c);
        auto a = u.component(c);
        auto nl = nu_start.component(c);
        for (std::size_t i = 0; i < pts; ++i) o[i] = (a[i] + h * nl[i]) / (1.0 + h * rate_[i]);
      }
      return leray_project(out);
    }
    // ETDRK2
    for (int c = 0; c < dim; ++c) {
      auto o = out.component(c);
      auto a = u.component(c);
      auto nl = nu_start.component(c);
      for (std::size_t i = 0; i < pts; ++i) o[i] = decay_[i] * a[i];
      if (nonlinear_.active())
        for (std::size_t i = 0; i < pts; ++i) o[i] += h * phi1_[i] * nl[i];
    }
    if (nonlinear_.active()) {
      const SpectralVectorField n_mid = nonlinear_(out, t + h);
      for (int c = 0; c < dim; ++c) {
        auto o = out.component(c);
        auto n0 = nu_start.component(c);
        auto n1 = n_mid.component(c);
        for (std::size_t i = 0; i < pts; ++i) o[i] += h * phi2_[i] * (n1[i] - n0[i]);
      }
    }
    return leray_project(out);
  }

 private:
  void set_step(double h) {
    if (h == step_) return;
    step_ = h;
    const std::size_t pts = rate_.size();
    decay_.resize(pts);
    phi1_.resize(pts);
    phi2_.resize(pts);
    for (std::size_t i = 0; i < pts; ++i) {
      const double z = -rate_[i] * h;
      decay_[i] = std::exp(z);
      phi1_[i] = phi1(z);
      phi2_[i] = phi2(z);
    }
  }

  SolverConfig config_;
  NonlinearEvaluator nonlinear_;
  std::vector<double> rate_;  // |k|^(2 alpha)
  double step_ = -1.0;
  std::vector<double> decay_, phi1_, phi2_;
};

void check_courant(const SolverConfig& config, double speed, double h, double t) {
  if (!config.advection) return;
  const double courant = h * speed / config.grid.spacing();
  if (courant > config.cfl_safety) {
    std::ostringstream os;
    os << "CFL condition violated at t = " << t << ": Courant number " << courant << " exceeds "
       << config.cfl_safety;
    throw NumericalError(os.str());
  }
}

void record_state(TrajectoryRecord& rec, const SolverConfig& config, double t, const SpectralVectorField& u,
                  const RecordHook& hook) {
  const std::size_t index = rec.norms.times.size();
  rec.norms.times.push_back(t);
  rec.norms.l2_sq.push_back(l2_squared(u));
  rec.norms.h_alpha_sq.push_back(h_alpha_squared(u, config.params.alpha));
  rec.norms.l_beta_plus_1_pow.push_back(lp_power(to_physical(u), config.params.beta + 1.0));
  if (config.snapshot_every > 0 && index % config.snapshot_every == 0) rec.snapshots.push_back({t, u});
  if (hook) hook(index, t, u);
}

}  // namespace

SpectralVectorField nonlinear_rhs(const SpectralVectorField& u, const PhysicalParams& params,
                                  const NonlinearOptions& options, double time) {
  NonlinearEvaluator eval(u.grid(), params, options);
  return eval(u, time);
}

SpectralVectorField step(const SpectralVectorField& u, const SolverConfig& config) {
  config.validate();
  if (!(u.grid() == config.grid)) throw ValidationError("step: field grid differs from solver grid");
  Stepper stepper(config);
  const SpectralVectorField n0 = stepper.begin(u, 0.0);
  check_courant(config, stepper.nonlinear().last_max_speed(), config.dt, 0.0);
  return stepper.finish(u, n0, config.dt, 0.0);
}

TrajectoryRecord simulate(const SpectralVectorField& u0, const SolverConfig& config, const RecordHook& hook) {
  config.validate();
  if (!(u0.grid() == config.grid)) throw ValidationError("simulate: initial field grid differs from solver grid");
  if (!u0.is_finite()) throw ValidationError("simulate: initial field has non-finite coefficients");

  TrajectoryRecord rec;
  rec.initial = leray_project(u0);
  SpectralVectorField u = rec.initial;
  record_state(rec, config, 0.0, u, hook);

  Stepper stepper(config);
  double t = 0.0;
  try {
    if (!config.adaptive) {
      const auto nsteps = static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
      const auto every = static_cast<std::size_t>(std::max<long long>(1, std::llround(config.record_every / config.dt)));
      for (std::size_t s = 1; s <= nsteps; ++s) {
        const SpectralVectorField n0 = stepper.begin(u, t);
        check_courant(config, stepper.nonlinear().last_max_speed(), config.dt, t);
        u = stepper.finish(u, n0, config.dt, t);
        t = static_cast<double>(s) * config.dt;
        rec.steps = s;
        if (s % every == 0 || s == nsteps) record_state(rec, config, t, u, hook);
      }
    } else {
      std::size_t next_index = 1;
      double next_record = std::min(config.record_every, config.t_end);
      const double eps = 1e-12 * std::max(1.0, config.t_end);
      while (t < config.t_end - eps) {
        const SpectralVectorField n0 = stepper.begin(u, t);
        double h = config.dt;
        const double speed = stepper.nonlinear().last_max_speed();
        if (config.advection && speed > 0.0) h = std::min(h, config.cfl_safety * config.grid.spacing() / speed);
        h = std::min(h, next_record - t);
        u = stepper.finish(u, n0, h, t);
        ++rec.steps;
        t += h;
        if (std::abs(t - next_record) <= eps) {
          t = next_record;
          record_state(rec, config, t, u, hook);
          ++next_index;
          next_record = std::min(static_cast<double>(next_index) * config.record_every, config.t_end);
        }
      }
    }
  } catch (const NumericalError& e) {
    throw SimulationAborted(e.what(), t, std::move(rec));
  }
  return rec;
}

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::taylor_green: return "taylor_green";
    case InitialKind::low_freq_random: return "low_freq_random";
    case InitialKind::gaussian_modulated: return "gaussian_modulated";
  }
  return "";
}

InitialKind initial_kind_from_string(std::string_view s) {
  for (auto k : {InitialKind::taylor_green, InitialKind::low_freq_random, InitialKind::gaussian_modulated})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown initial data kind '" + std::string(s) + "'");
}

namespace {

SpectralVectorField taylor_green(const GridSpec& grid, double amplitude) {
  SpectralVectorField u(grid);
  const cplx i(0.0, 1.0);
  if (grid.dim == 3) {
    // (sin x cos y cos z, -cos x sin y cos z, 0) on the lowest box modes.
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) {
          u.mode(0, sx, sy, sz) = -i * (amplitude * sx / 8.0);
          u.mode(1, sx, sy, sz) = i * (amplitude * sy / 8.0);
        }
  } else {
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        u.mode(0, sx, sy) = -i * (amplitude * sx / 4.0);
        u.mode(1, sx, sy) = i * (amplitude * sy / 4.0);
      }
  }
  return u;
}

SpectralVectorField symmetrize(const SpectralVectorField& f) {
  SpectralVectorField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto src = f.component(c);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = 0.5 * (src[i] + std::conj(src[detail::conjugate_index(f.grid(), i)]));
  }
  return out;
}

SpectralVectorField normalized(SpectralVectorField u, double amplitude) {
  const double rms = std::sqrt(l2_squared(u) / u.grid().volume());
  if (rms > 0.0) u *= amplitude / rms;
  return u;
}

}  // namespace

SpectralVectorField make_initial_data(InitialKind kind, const GridSpec& grid, std::uint64_t seed, double amplitude) {
  grid.validate();
  if (!(amplitude > 0.0)) throw ValidationError("initial.amplitude must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  switch (kind) {
    case InitialKind::taylor_green:
      return taylor_green(grid, amplitude);

    case InitialKind::low_freq_random: {
      SpectralVectorField u(grid);
      for_each_mode(grid, [&](const Mode& m) {
        int r2 = 0;
        bool kept = true;
        for (int d = 0; d < grid.dim; ++d) {
          r2 += m.j[d] * m.j[d];
          kept = kept && dealias_keeps(grid.n, m.j[d]);
        }
        if (r2 == 0 || r2 > 9 || !kept) return;
        const std::size_t partner = detail::conjugate_index(grid, m.index);
        if (partner < m.index) return;
        for (int c = 0; c < grid.dim; ++c) {
          const double re = normal(rng);
          const double im = partner == m.index ? 0.0 : normal(rng);
          u.component(c)[m.index] = cplx(re, im);
          u.component(c)[partner] = cplx(re, -im);
        }
      });
      return normalized(leray_project(u), amplitude);
    }

    case InitialKind::gaussian_modulated: {
      // Gaussian envelope of width L/10 around a random centre carrying a
      // random constant vector, made solenoidal by projection.
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> centre(static_cast<std::size_t>(grid.dim));
      std::vector<double> direction(static_cast<std::size_t>(grid.dim));
      for (auto& x : centre) x = grid.box_length * unit(rng);
      for (auto& a : direction) a = normal(rng);
      const double sigma = grid.box_length / 10.0;
      PhysicalVectorField phys(grid);
      for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto x = phys.position(p);
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
          double dx = std::remainder(x[d] - centre[d], grid.box_length);
          r2 += dx * dx;
        }
        const double g = std::exp(-r2 / (2.0 * sigma * sigma));
        for (int c = 0; c < grid.dim; ++c) phys.component(c)[p] = g * direction[c];
      }
      SpectralVectorField u = symmetrize(dealias(to_spectral(phys)));
      for (int c = 0; c < grid.dim; ++c) u.component(c)[0] = 0.0;
      return normalized(leray_project(u), amplitude);
    }
  }
  throw ValidationError("make_initial_data: unknown kind");
}

}  // namespace dampns
