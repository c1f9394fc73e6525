#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>

#include "dampns/errors.hpp"
#include "dampns/fractional_heat.hpp"
#include "helpers.hpp"

using namespace dampns;

namespace {

double gaussian_closed_form(double t) { return std::pow(kPi / (1.0 + 2.0 * t), 1.5); }

// Independent oracle: exp-sinh quadrature of
// 4 pi int_0^inf exp(-2 r^(2 alpha) t - r^2) r^2 dr for the Gaussian datum.
double gaussian_oracle(double alpha, double t) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double r) {
    if (r > 1e100) return 0.0;
    return std::exp(-2.0 * std::pow(r, 2.0 * alpha) * t - r * r) * r * r;
  };
  return 4.0 * kPi * integrator.integrate(f, 1e-15);
}

}  // namespace

TEST_CASE("evolve_box single modes") {
  const GridSpec g{8, 2 * kPi, 3};
  SpectralVectorField u(g);
  u.mode(0, 1, 0, 0) = cplx(0.0, -0.5);
  u.mode(1, 0, 2, 0) = 1.0;
  CHECK(evolve_box(u, 1.0, 0.0) == u);
  const auto e1 = evolve_box(u, 1.0, 1.0);
  CHECK(std::abs(e1.mode(0, 1, 0, 0) - std::exp(-1.0) * cplx(0.0, -0.5)) < 1e-16);
  const auto e2 = evolve_box(u, 0.5, 3.0);
  CHECK(e2.mode(1, 0, 2, 0).real() == doctest::Approx(std::exp(-6.0)).epsilon(1e-14));
  CHECK_THROWS_AS(evolve_box(u, 1.0, -1e-3), ValidationError);
}

TEST_CASE("evolve_box semigroup property") {
  const GridSpec g{12, 4.0, 3};
  const auto u = testing::random_field(g, 17);
  for (double alpha : {0.3, 1.0, 1.7}) {
    const auto two = evolve_box(evolve_box(u, alpha, 0.013), alpha, 0.029);
    const auto one = evolve_box(u, alpha, 0.042);
    CHECK(testing::max_diff(two, one) <= 1e-13 * u.max_abs_coefficient());
  }
}

TEST_CASE("Gaussian closed form") {
  const auto data = gaussian_data();
  CHECK(l2_sq_r3(data, 1.0, 0.0) == doctest::Approx(5.568327996831708).epsilon(1e-14));
  for (double t : {0.0, 1.0, 10.0, 100.0}) CHECK(std::abs(l2_sq_r3(data, 1.0, t) - gaussian_closed_form(t)) <= 1e-8);
  CHECK(l2_sq_r3(data, 1.0, 10.0) == doctest::Approx(0.05787).epsilon(1e-3));
  for (double t : {0.0, 0.5, 1e2, 1e4}) CHECK(l2_sq_r3(data, 1.0, t) == doctest::Approx(gaussian_closed_form(t)).epsilon(1e-12));
}

TEST_CASE("quadrature agrees with an independent integrator for other alpha") {
  const auto data = gaussian_data();
  for (double alpha : {0.5, 0.75, 1.25, 1.9})
    for (double t : {0.0, 0.3, 7.0, 500.0})
      CHECK(l2_sq_r3(data, alpha, t) == doctest::Approx(gaussian_oracle(alpha, t)).epsilon(1e-10));
}

TEST_CASE("l2_sq_r3 is decreasing and log-convex in t") {
  // A positive mixture of decaying exponentials in t, hence log-convex in t.
  // In log t the Gaussian closed form -3/2 log(1 + 2 e^s) is concave instead.
  const auto data = gaussian_data();
  for (double alpha : {0.5, 0.8, 1.0}) {
    std::vector<double> logv;
    for (int i = 0; i <= 40; ++i) logv.push_back(std::log(l2_sq_r3(data, alpha, 0.25 * i)));
    for (std::size_t i = 1; i < logv.size(); ++i) CHECK(logv[i] < logv[i - 1]);
    for (std::size_t i = 1; i + 1 < logv.size(); ++i) CHECK(logv[i + 1] - 2 * logv[i] + logv[i - 1] >= -1e-12);
  }
  std::vector<double> logv;
  for (int i = 0; i <= 40; ++i) logv.push_back(std::log(l2_sq_r3(data, 1.0, std::pow(10.0, -2.0 + 0.1 * i))));
  for (std::size_t i = 1; i + 1 < logv.size(); ++i) CHECK(logv[i + 1] - 2 * logv[i] + logv[i - 1] <= 1e-12);
  const auto ann = annulus_data();
  CHECK(l2_sq_r3(ann, 1.0, 2.0) < l2_sq_r3(ann, 1.0, 1.0));
}

TEST_CASE("semigroup_rate_fit recovers the linear rate") {
  const auto data = gaussian_data();
  for (double alpha : {0.5, 0.75, 1.0, 1.25}) {
    const auto rec = semigroup_rate_fit(data, alpha, {100.0, 1e4}, 40);
    CHECK(rec.theory_exponent == -3.0 / (2.0 * alpha));
    CHECK(std::abs(rec.fitted_exponent - rec.theory_exponent) <= 0.03 * std::abs(rec.theory_exponent));
    CHECK_FALSE(rec.flagged);
    CHECK(rec.times.size() == 40);
    CHECK(rec.times.front() == doctest::Approx(100.0));
    CHECK(rec.times.back() == doctest::Approx(1e4));
    for (std::size_t i = 1; i < rec.l2_sq.size(); ++i) CHECK(rec.l2_sq[i] < rec.l2_sq[i - 1]);
  }
  // the fitted slope approaches -3/2 as the window moves out
  const double near = semigroup_rate_fit(data, 1.0, {1.0, 100.0}, 30).fitted_exponent;
  const double far = semigroup_rate_fit(data, 1.0, {100.0, 1e4}, 30).fitted_exponent;
  CHECK(std::abs(far + 1.5) < std::abs(near + 1.5));
}

TEST_CASE("data vanishing at the origin decays faster and is flagged") {
  const auto rec = semigroup_rate_fit(annulus_data(), 1.0, {1.0, 100.0}, 30);
  CHECK(rec.fitted_exponent < -1.5);
  CHECK_FALSE(rec.l1_like);
  CHECK(rec.flagged);
}

TEST_CASE("semigroup_rate_fit preconditions") {
  const auto data = gaussian_data();
  CHECK_THROWS_AS((semigroup_rate_fit(data, 1.0, {0.5, 100.0}, 30)), ValidationError);
  CHECK_THROWS_AS((semigroup_rate_fit(data, 1.0, {10.0, 500.0}, 30)), ValidationError);
  CHECK_THROWS_AS((semigroup_rate_fit(data, 1.0, {10.0, 1e4}, 10)), ValidationError);
  CHECK_THROWS_AS((semigroup_rate_fit(data, 0.0, {10.0, 1e4}, 30)), ValidationError);
}

TEST_CASE("Lq bound exponents") {
  CHECK(lq_bound_exponent(1.0, 1.0, 2.0) == -0.75);
  CHECK(lq_bound_exponent(1.0, 3.0, 3.0) == 0.0);
  CHECK(lq_bound_exponent(1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0) == -2.0);
  CHECK_THROWS_AS(lq_bound_exponent(1.0, 3.0, 2.0), ValidationError);
  CHECK_THROWS_AS(lq_bound_exponent(1.0, 0.5, 2.0), ValidationError);
  CHECK_THROWS_AS(lq_bound_exponent(1.0, 1.0, 2.0, -1.0), ValidationError);
  // decreasing in mu and in 1/r - 1/q
  double prev = 1.0;
  for (double mu = 0.0; mu <= 3.0; mu += 0.5) {
    const double e = lq_bound_exponent(0.8, 1.0, 2.0, mu);
    CHECK(e < prev);
    prev = e;
  }
  prev = 1.0;
  for (double q : {1.0, 1.5, 2.0, 4.0, 10.0}) {
    const double e = lq_bound_exponent(0.8, 1.0, q);
    CHECK(e < prev);
    prev = e;
  }
}
