#pragma once

#include "levykde/estimate.hpp"
#include "levykde/kernels.hpp"

namespace levykde {

enum class IntervalMethod { wald, inversion };

struct IntervalResult {
  double center = 0.0;  // the point estimate the interval was built around
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  double variance_scale = 0.0;
  IntervalMethod method = IntervalMethod::inversion;
  // set when the inversion acceptance region is empty (strongly negative
  // center); lo == hi == 0 then
  bool empty = false;

  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double f) const { return !empty && lo <= f && f <= hi; }
};

// The studentization constant c with (f_hat - gamma_hat - f) / sqrt(c f)
// asymptotically standard normal: the kernel-pair roughness over
// eta1^d eta2^d times the denominator of the point estimate. denom must be
// positive (some observation carried weight).
double variance_scale(const PointEstimate&, const Bandwidth&, const KernelSpec& g1,
                      const KernelSpec& g2, int d);

// Plain interval: center +- z sqrt(c f_hat). Collapses to the center when
// f_hat == 0.
IntervalResult wald_interval(double center, double f_hat, double c, double z);
IntervalResult ci_wald(const PointEstimate&, double c, double level,
                       bool subtract_bias = true);

// Exact inversion of {f >= 0 : (center - f)^2 <= z^2 c f}. Quadratic roots
// center + z^2 c / 2 +- sqrt(z^2 c center + z^4 c^2 / 4), intersected with
// [0, inf); empty (flagged) when the discriminant is negative, which needs
// center < -z^2 c / 4.
IntervalResult inversion_interval(double center, double c, double z);
IntervalResult ci_inversion(const PointEstimate&, double c, double level,
                            bool subtract_bias = true);

}  // namespace levykde
