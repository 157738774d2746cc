#include "levykde/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace levykde {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  }
  if (p == 0.5) return 0.0;

  // Rational tail approximation (Abramowitz & Stegun 26.2.23), good to ~4.5e-4.
  const double tail = p < 0.5 ? p : 1.0 - p;
  const double t = std::sqrt(-2.0 * std::log(tail));
  double z = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                     (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  if (p < 0.5) z = -z;

  // Newton on the cdf; quadratic convergence pushes the start error to
  // machine precision in a handful of steps.
  for (int iter = 0; iter < 8; ++iter) {
    const double err = normal_cdf(z) - p;
    const double step = err / normal_pdf(z);
    z -= step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
  }
  return z;
}

}  // namespace levykde
