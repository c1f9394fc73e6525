#pragma once

// Periodic-box spectral toolbox: grids, Fourier-space vector fields, the
// fractional Laplacian symbol, Leray projection, 2/3 dealiasing and norms.
//
// Coefficient convention: u(x) = sum_k u_hat(k) exp(i k.x), so the forward
// transform carries the 1/N factor and ||u||^2_{L2} = L^dim sum_k |u_hat(k)|^2.
// Modes are stored in FFT order along every axis, row-major over axes.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dampns {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct GridSpec {
  int n = 32;
  double box_length = 2.0 * kPi;
  int dim = 3;

  void validate() const;

  std::size_t points() const;
  double wavenumber_unit() const { return 2.0 * kPi / box_length; }
  double spacing() const { return box_length / n; }
  double cell_volume() const;
  double volume() const;

  // Signed mode index j for storage index i along one axis.
  int mode_index(int i) const { return i < n / 2 ? i : i - n; }

  bool operator==(const GridSpec&) const = default;
};

struct PhysicalParams {
  double alpha = 1.0;
  double beta = 1.0;
  double nu = 1.0;

  // alpha in (0, 2], beta >= 1, nu >= 0.
  void validate() const;
  // alpha in (0, 5/4): the range where the damped-equation decay theorem applies.
  bool in_theorem_range() const { return alpha > 0.0 && alpha < 1.25; }
  // Set when alpha is accepted but lies outside the theorem range.
  std::optional<std::string> warning() const;

  bool operator==(const PhysicalParams&) const = default;
};

// Per-axis wavenumbers (2 pi / L) j in FFT order [0..n/2-1, -n/2..-1].
std::vector<double> wavenumbers(const GridSpec& grid);

class SpectralVectorField {
 public:
  SpectralVectorField() = default;
  explicit SpectralVectorField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  std::size_t modes() const { return grid_.points(); }

  std::span<cplx> component(int c) { return data_[c]; }
  std::span<const cplx> component(int c) const { return data_[c]; }

  // Flat storage index of the mode with signed indices (jx, jy[, jz]).
  std::size_t index_of(int jx, int jy, int jz = 0) const;
  cplx& mode(int c, int jx, int jy, int jz = 0) { return data_[c][index_of(jx, jy, jz)]; }
  cplx mode(int c, int jx, int jy, int jz = 0) const { return data_[c][index_of(jx, jy, jz)]; }

  bool is_finite() const;
  double max_abs_coefficient() const;

  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double s);

  friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
  friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
  friend SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

  bool operator==(const SpectralVectorField&) const = default;

 private:
  GridSpec grid_{};
  std::vector<std::vector<cplx>> data_;
};

// Real vector field sampled on the grid points x_i = i L / n.
class PhysicalVectorField {
 public:
  PhysicalVectorField() = default;
  explicit PhysicalVectorField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  std::size_t points() const { return grid_.points(); }
  std::span<double> component(int c) { return data_[c]; }
  std::span<const double> component(int c) const { return data_[c]; }

  // Grid point coordinates of flat index p.
  std::vector<double> position(std::size_t p) const;

 private:
  GridSpec grid_{};
  std::vector<std::vector<double>> data_;
};

PhysicalVectorField to_physical(const SpectralVectorField& field);
SpectralVectorField to_spectral(const PhysicalVectorField& field);

// Multiplies mode k by |k|^(2 alpha sign). sign = +1 applies (-Delta)^alpha,
// sign = -1 its inverse on mean-free data.
SpectralVectorField fractional_laplacian(const SpectralVectorField& field, double alpha, int sign = +1);

// u_hat(k) - k (k . u_hat(k)) / |k|^2; the mean is kept, Nyquist modes are dropped.
SpectralVectorField leray_project(const SpectralVectorField& field);

// Zeroes every mode with 3|j| >= n along any axis.
SpectralVectorField dealias(const SpectralVectorField& field);
bool dealias_keeps(int n, int j);

struct FieldNorms {
  double l2 = 0.0;
  double h_alpha_seminorm = 0.0;
  double l_beta_plus_1 = 0.0;
};

FieldNorms norms(const SpectralVectorField& field, const PhysicalParams& params);

// Squared/powered pieces that enter energy balances directly.
double l2_squared(const SpectralVectorField& field);
double h_alpha_squared(const SpectralVectorField& field, double alpha);
double lp_power(const PhysicalVectorField& field, double p);  // sum |u|^p dx

// Spectral inner product <a, b>_{L2} (real part).
double inner_product(const SpectralVectorField& a, const SpectralVectorField& b);

// max_k |k . u_hat(k)|.
double max_divergence(const SpectralVectorField& field);
// max_k |k . u_hat(k)| / max_k |u_hat(k)|, zero for the zero field.
double relative_divergence(const SpectralVectorField& field);

// max_k |u_hat(-k) - conj(u_hat(k))|.
double conjugate_asymmetry(const SpectralVectorField& field);

// Gradient tensor of every component, Nyquist derivative set to zero.
// Entry [c * dim + d] holds d u_c / d x_d in physical space.
std::vector<std::vector<double>> physical_gradient(const SpectralVectorField& field);

// Max over grid points of the Frobenius norm of the spectral gradient.
double gradient_linf(const SpectralVectorField& field);
double max_speed(const PhysicalVectorField& field);

// Deterministic pairwise summation with a fixed tree topology.
double pairwise_sum(std::span<const double> terms);

}  // namespace dampns
