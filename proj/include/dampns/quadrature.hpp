#pragma once

#include <functional>

namespace dampns {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) integration on [a, b]. Bisects the
// panel with the largest |K15 - G7| until the summed estimate is below
// max(abs_tol, rel_tol |I|). Throws QuadratureError past max_panels.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double rel_tol = 1e-13, double abs_tol = 0.0, int max_panels = 2000);

// Integral over [0, inf) of a function that decays beyond `support`, taken
// on geometrically growing panels starting at `scale`. Stops once past
// 2 * support with a panel contribution below tail_rel of the running total.
QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale, double support,
                                     double tail_rel = 1e-13, int max_doublings = 400);

}  // namespace dampns
