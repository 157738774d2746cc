#include "levykde/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "levykde/normal.hpp"

namespace levykde {

namespace {

double quantile_of_level(double level) {
  // level 0 is allowed as the degenerate one-sided limit (z = 0)
  if (!(level >= 0.0) || !(level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in [0, 1)");
  }
  return normal_quantile(0.5 + 0.5 * level);
}

double interval_center(const PointEstimate& est, bool subtract_bias) {
  return subtract_bias ? est.f_hat - est.gamma_hat : est.f_hat;
}

}  // namespace

double variance_scale(const PointEstimate& est, const Bandwidth& bw, const KernelSpec& g1,
                      const KernelSpec& g2, int d) {
  if (d < 1) throw std::invalid_argument("variance_scale: d must be >= 1");
  if (!(bw.eta1 > 0.0) || !(bw.eta2 > 0.0)) {
    throw std::invalid_argument("variance_scale: bandwidths must be > 0");
  }
  if (!(est.denom > 0.0)) {
    throw std::invalid_argument(
        "variance_scale: denominator is zero, no observation carried weight");
  }
  return roughness(g1, g2) /
         (std::pow(bw.eta1, d) * std::pow(bw.eta2, d) * est.denom);
}

IntervalResult wald_interval(double center, double f_hat, double c, double z) {
  if (!(c >= 0.0)) throw std::invalid_argument("wald_interval: c must be >= 0");
  if (!(f_hat >= 0.0)) throw std::invalid_argument("wald_interval: f_hat must be >= 0");
  IntervalResult r;
  r.method = IntervalMethod::wald;
  r.center = center;
  r.variance_scale = c;
  const double hw = z * std::sqrt(c * f_hat);
  r.lo = center - hw;
  r.hi = center + hw;
  return r;
}

IntervalResult ci_wald(const PointEstimate& est, double c, double level,
                       bool subtract_bias) {
  const double z = quantile_of_level(level);
  IntervalResult r = wald_interval(interval_center(est, subtract_bias), est.f_hat, c, z);
  r.level = level;
  return r;
}

IntervalResult inversion_interval(double center, double c, double z) {
  if (!(c >= 0.0)) throw std::invalid_argument("inversion_interval: c must be >= 0");
  if (!(z >= 0.0)) throw std::invalid_argument("inversion_interval: z must be >= 0");
  IntervalResult r;
  r.method = IntervalMethod::inversion;
  r.center = center;
  r.variance_scale = c;
  const double shift = 0.5 * z * z * c;
  const double disc = z * z * c * center + shift * shift;
  if (disc < 0.0) {
    // center below -z^2 c / 4: no f >= 0 passes the test
    r.empty = true;
    r.lo = r.hi = 0.0;
    return r;
  }
  const double root = std::sqrt(disc);
  r.lo = std::max(center + shift - root, 0.0);
  r.hi = std::max(center + shift + root, 0.0);
  return r;
}

IntervalResult ci_inversion(const PointEstimate& est, double c, double level,
                            bool subtract_bias) {
  const double z = quantile_of_level(level);
  IntervalResult r = inversion_interval(interval_center(est, subtract_bias), c, z);
  r.level = level;
  return r;
}

}  // namespace levykde
