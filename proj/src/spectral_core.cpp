#include "dampns/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dampns/detail/modes.hpp"
#include "dampns/errors.hpp"
#include "dampns/fft.hpp"

namespace dampns {

using detail::for_each_mode;
using detail::Mode;

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) throw ValidationError("grid.dim must be 2 or 3");
  if (n < 4) throw ValidationError("grid.n must be at least 4");
  if (n % 2 != 0) throw ValidationError("grid.n must be even");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ValidationError("grid.box_length must be positive and finite");
}

std::size_t GridSpec::points() const {
  std::size_t p = 1;
  for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(n);
  return p;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }
double GridSpec::volume() const { return std::pow(box_length, dim); }

void PhysicalParams::validate() const {
  if (!(alpha > 0.0) || alpha > 2.0) throw ValidationError("physics.alpha must lie in (0, 2]");
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw ValidationError("physics.beta must be >= 1");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ValidationError("physics.nu must be >= 0");
}

std::optional<std::string> PhysicalParams::warning() const {
  if (in_theorem_range()) return std::nullopt;
  std::ostringstream os;
  os << "alpha = " << alpha << " lies outside (0, 5/4); theoretical exponents are not available";
  return os.str();
}

std::vector<double> wavenumbers(const GridSpec& grid) {
  std::vector<double> k(static_cast<std::size_t>(grid.n));
  const double unit = grid.wavenumber_unit();
  for (int i = 0; i < grid.n; ++i) k[i] = unit * grid.mode_index(i);
  return k;
}

SpectralVectorField::SpectralVectorField(const GridSpec& grid)
    : grid_(grid), data_(static_cast<std::size_t>(grid.dim), std::vector<cplx>(grid.points())) {}

std::size_t SpectralVectorField::index_of(int jx, int jy, int jz) const {
  const int n = grid_.n;
  auto wrap = [n](int j) { return static_cast<std::size_t>(((j % n) + n) % n); };
  std::size_t idx = wrap(jx) * static_cast<std::size_t>(n) + wrap(jy);
  if (grid_.dim == 3) idx = idx * static_cast<std::size_t>(n) + wrap(jz);
  return idx;
}

bool SpectralVectorField::is_finite() const {
  for (const auto& comp : data_)
    for (const auto& z : comp)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double SpectralVectorField::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& comp : data_)
    for (const auto& z : comp) m = std::max(m, std::abs(z));
  return m;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  if (!(grid_ == other.grid_)) throw ValidationError("field grid mismatch");
  for (std::size_t c = 0; c < data_.size(); ++c)
    for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += other.data_[c][i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  if (!(grid_ == other.grid_)) throw ValidationError("field grid mismatch");
  for (std::size_t c = 0; c < data_.size(); ++c)
    for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] -= other.data_[c][i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& comp : data_)
    for (auto& z : comp) z *= s;
  return *this;
}

PhysicalVectorField::PhysicalVectorField(const GridSpec& grid)
    : grid_(grid), data_(static_cast<std::size_t>(grid.dim), std::vector<double>(grid.points())) {}

std::vector<double> PhysicalVectorField::position(std::size_t p) const {
  const std::size_t n = static_cast<std::size_t>(grid_.n);
  std::vector<double> x(static_cast<std::size_t>(grid_.dim));
  for (int d = grid_.dim - 1; d >= 0; --d) {
    x[d] = grid_.spacing() * static_cast<double>(p % n);
    p /= n;
  }
  return x;
}

PhysicalVectorField to_physical(const SpectralVectorField& field) {
  PhysicalVectorField out(field.grid());
  auto& fft = transform_for(field.grid());
  for (int c = 0; c < field.components(); ++c) fft.inverse(field.component(c), out.component(c));
  return out;
}

SpectralVectorField to_spectral(const PhysicalVectorField& field) {
  SpectralVectorField out(field.grid());
  auto& fft = transform_for(field.grid());
  for (int c = 0; c < field.components(); ++c) fft.forward(field.component(c), out.component(c));
  return out;
}

SpectralVectorField fractional_laplacian(const SpectralVectorField& field, double alpha, int sign) {
  if (!(alpha > 0.0)) throw ValidationError("fractional_laplacian: alpha must be positive");
  if (sign != 1 && sign != -1) throw ValidationError("fractional_laplacian: sign must be +1 or -1");
  if (sign == -1) {
    for (int c = 0; c < field.components(); ++c)
      if (field.component(c)[0] != cplx(0.0, 0.0))
        throw ValidationError("inverse fractional Laplacian requires a zero mean mode");
  }
  SpectralVectorField out = field;
  const double power = alpha * sign;
  for_each_mode(field.grid(), [&](const Mode& m) {
    const double factor = m.k2 == 0.0 ? 0.0 : std::pow(m.k2, power);
    for (int c = 0; c < out.components(); ++c) out.component(c)[m.index] *= factor;
  });
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& field) {
  SpectralVectorField out = field;
  const int dim = field.grid().dim;
  const int n = field.grid().n;
  for_each_mode(field.grid(), [&](const Mode& m) {
    if (m.k2 == 0.0) return;
    // A Nyquist mode is its own conjugate partner but carries k and -k at
    // once; no solenoidal real field lives there.
    for (int d = 0; d < dim; ++d)
      if (2 * m.j[d] == -n) {
        for (int c = 0; c < dim; ++c) out.component(c)[m.index] = 0.0;
        return;
      }
    cplx kdotu = 0.0;
    for (int c = 0; c < dim; ++c) kdotu += m.k[c] * out.component(c)[m.index];
    const cplx s = kdotu / m.k2;
    for (int c = 0; c < dim; ++c) out.component(c)[m.index] -= m.k[c] * s;
  });
  return out;
}

bool dealias_keeps(int n, int j) { return 3 * std::abs(j) < n; }

SpectralVectorField dealias(const SpectralVectorField& field) {
  SpectralVectorField out = field;
  const int n = field.grid().n;
  const int dim = field.grid().dim;
  for_each_mode(field.grid(), [&](const Mode& m) {
    for (int d = 0; d < dim; ++d) {
      if (!dealias_keeps(n, m.j[d])) {
        for (int c = 0; c < out.components(); ++c) out.component(c)[m.index] = 0.0;
        return;
      }
    }
  });
  return out;
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

double l2_squared(const SpectralVectorField& field) {
  std::vector<double> terms(field.modes());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < field.components(); ++c) s += std::norm(field.component(c)[i]);
    terms[i] = s;
  }
  return field.grid().volume() * pairwise_sum(terms);
}

double h_alpha_squared(const SpectralVectorField& field, double alpha) {
  std::vector<double> terms(field.modes());
  for_each_mode(field.grid(), [&](const Mode& m) {
    if (m.k2 == 0.0) {
      terms[m.index] = 0.0;
      return;
    }
    double s = 0.0;
    for (int c = 0; c < field.components(); ++c) s += std::norm(field.component(c)[m.index]);
    terms[m.index] = std::pow(m.k2, alpha) * s;
  });
  return field.grid().volume() * pairwise_sum(terms);
}

double lp_power(const PhysicalVectorField& field, double p) {
  std::vector<double> terms(field.points());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < field.components(); ++c) s += field.component(c)[i] * field.component(c)[i];
    terms[i] = p == 2.0 ? s : std::pow(std::sqrt(s), p);
  }
  return field.grid().cell_volume() * pairwise_sum(terms);
}

FieldNorms norms(const SpectralVectorField& field, const PhysicalParams& params) {
  FieldNorms out;
  out.l2 = std::sqrt(l2_squared(field));
  out.h_alpha_seminorm = std::sqrt(h_alpha_squared(field, params.alpha));
  const double p = params.beta + 1.0;
  out.l_beta_plus_1 = std::pow(lp_power(to_physical(field), p), 1.0 / p);
  return out;
}

double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("inner_product: grid mismatch");
  std::vector<double> terms(a.modes());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < a.components(); ++c) s += (std::conj(a.component(c)[i]) * b.component(c)[i]).real();
    terms[i] = s;
  }
  return a.grid().volume() * pairwise_sum(terms);
}

double max_divergence(const SpectralVectorField& field) {
  double m = 0.0;
  const int dim = field.grid().dim;
  for_each_mode(field.grid(), [&](const Mode& md) {
    cplx s = 0.0;
    for (int c = 0; c < dim; ++c) s += md.k[c] * field.component(c)[md.index];
    m = std::max(m, std::abs(s));
  });
  return m;
}

double relative_divergence(const SpectralVectorField& field) {
  const double scale = field.max_abs_coefficient();
  return scale == 0.0 ? 0.0 : max_divergence(field) / scale;
}

double conjugate_asymmetry(const SpectralVectorField& field) {
  double m = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    auto u = field.component(c);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t partner = detail::conjugate_index(field.grid(), i);
      m = std::max(m, std::abs(u[partner] - std::conj(u[i])));
    }
  }
  return m;
}

std::vector<std::vector<double>> physical_gradient(const SpectralVectorField& field) {
  const GridSpec& g = field.grid();
  const int dim = g.dim;
  auto& fft = transform_for(g);
  std::vector<std::vector<double>> grad(static_cast<std::size_t>(dim * dim), std::vector<double>(g.points()));
  std::vector<cplx> scratch(g.points());
  for (int c = 0; c < dim; ++c) {
    for (int d = 0; d < dim; ++d) {
      auto u = field.component(c);
      for_each_mode(g, [&](const Mode& m) {
        const double kd = 2 * m.j[d] == -g.n ? 0.0 : m.k[d];
        scratch[m.index] = cplx(0.0, kd) * u[m.index];
      });
      fft.inverse(scratch, grad[c * dim + d]);
    }
  }
  return grad;
}

double gradient_linf(const SpectralVectorField& field) {
  const auto grad = physical_gradient(field);
  double m = 0.0;
  for (std::size_t p = 0; p < field.modes(); ++p) {
    double s = 0.0;
    for (const auto& g : grad) s += g[p] * g[p];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double max_speed(const PhysicalVectorField& field) {
  double m = 0.0;
  for (std::size_t p = 0; p < field.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < field.components(); ++c) s += field.component(c)[p] * field.component(c)[p];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

}  // namespace dampns
