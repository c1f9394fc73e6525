#pragma once

// Exact evolution of v_t + (-Delta)^alpha v = 0: on the periodic box through
// the Fourier multiplier exp(-|k|^(2 alpha) t), and on R^3 for radial data
// through one-dimensional quadrature of the Plancherel integral.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dampns/spectral_core.hpp"

namespace dampns {

SpectralVectorField evolve_box(const SpectralVectorField& field, double alpha, double t);

// Radial Fourier-side amplitude of the initial datum on R^3.
struct RadialInitialData {
  std::function<double(double)> profile;
  std::string label;
  // profile(0) != 0: stands in for integrable data with nonzero mean.
  bool l1_like = true;
  // Radius past which the profile is negligible or decaying.
  double support = 1.0;
};

// u0(x) = exp(-|x|^2 / 2), whose transform is (2 pi)^{3/2} exp(-r^2 / 2).
RadialInitialData gaussian_data();
// Smooth bump sin^2(pi (r - 1)) on r in [1, 2]; vanishes near r = 0.
RadialInitialData annulus_data();

// ||v(t)||^2_{L2(R^3)} = (2 pi)^-3 4 pi int_0^inf exp(-2 r^(2 alpha) t) profile(r)^2 r^2 dr.
double l2_sq_r3(const RadialInitialData& data, double alpha, double t);

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool operator==(const FitWindow&) const = default;
};

struct SemigroupDecayRecord {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> l2_sq;
  double fitted_exponent = 0.0;
  double residual = 0.0;
  double theory_exponent = 0.0;  // -3 / (2 alpha)
  bool l1_like = true;
  bool flagged = false;
};

inline constexpr double kSemigroupResidualThreshold = 0.05;

// Least-squares slope of log ||v||^2 against log t on geometrically spaced
// times. Poor fits and non-integrable-like data are flagged, not thrown.
SemigroupDecayRecord semigroup_rate_fit(const RadialInitialData& data, double alpha, FitWindow window,
                                        int samples);

// Exponent of t in the L^r -> L^q bound for (-Delta)^{-mu/2} v:
// -mu / (2 alpha) - 3 / (2 alpha) (1/r - 1/q). q may be +infinity.
double lq_bound_exponent(double alpha, double r, double q, double mu = 0.0);

}  // namespace dampns
