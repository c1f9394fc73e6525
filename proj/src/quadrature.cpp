#include "dampns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "dampns/errors.hpp"

namespace dampns {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; Gauss
// points are the odd-indexed Kronrod abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel rule15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                double abs_tol, int max_panels) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Panel> panels;
  Panel first = rule15(f, a, b);
  out.evaluations = 15;
  panels.push(first);
  double total = first.value;
  double err = first.error;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_panels) {
      std::ostringstream os;
      os << "adaptive quadrature did not converge on [" << a << ", " << b << "]: estimate " << total
         << ", error " << err;
      throw QuadratureError(os.str());
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point; accept it.
      err -= worst.error;
      worst.error = 0.0;
      panels.push(worst);
      if (panels.top().error == 0.0) break;
      continue;
    }
    Panel left = rule15(f, worst.a, mid);
    Panel right = rule15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum from the panels so the result does not carry update round-off.
  total = 0.0;
  err = 0.0;
  std::vector<Panel> all;
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    total += p.value;
    err += p.error;
  }
  out.value = total;
  out.error = err;
  if (!std::isfinite(out.value)) throw QuadratureError("quadrature produced a non-finite value");
  return out;
}

QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale, double support,
                                     double tail_rel, int max_doublings) {
  if (!(scale > 0.0) || !(support > 0.0)) throw ValidationError("integrate_half_line: scale and support must be positive");
  QuadratureResult out;
  double lo = 0.0;
  double hi = scale;
  for (int i = 0; i < max_doublings; ++i) {
    const auto piece = integrate_gk15(f, lo, hi, 1e-14, 1e-300);
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    if (hi >= 2.0 * support && std::abs(piece.value) <= tail_rel * std::abs(out.value)) return out;
    if (hi >= 2.0 * support && out.value == 0.0 && piece.value == 0.0) return out;
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) break;
  }
  throw QuadratureError("half-line quadrature: tail bound not reached");
}

}  // namespace dampns
