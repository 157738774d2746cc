#include "levykde/stable_sampler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levykde {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument(
        "one-sided stable sampling requires 0 < alpha < 1 (small jumps must be summable)");
  }
}

}  // namespace

double standard_one_sided_stable(double alpha, Rng& rng) {
  check_alpha(alpha);
  const double x = std::numbers::pi * rng.uniform_open();
  const double w = rng.exponential();
  const double a = std::pow(std::sin((1.0 - alpha) * x), 1.0 - alpha) *
                   std::pow(std::sin(alpha * x), alpha) / std::sin(x);
  return std::pow(a / std::pow(w, 1.0 - alpha), 1.0 / alpha);
}

double one_sided_stable_increment(double h, double c, double alpha, Rng& rng) {
  check_alpha(alpha);
  if (!(h > 0.0)) throw std::invalid_argument("stable increment: h must be > 0");
  if (c < 0.0) throw std::invalid_argument("stable increment: Levy scale must be >= 0");
  if (c == 0.0) return 0.0;
  const double scale = std::pow(h * c * std::tgamma(1.0 - alpha) / alpha, 1.0 / alpha);
  return scale * standard_one_sided_stable(alpha, rng);
}

double truncated_one_sided_stable_increment(double h, double c, double alpha, double cap,
                                            Rng& rng) {
  check_alpha(alpha);
  if (!(cap > 0.0)) throw std::invalid_argument("stable increment: cap must be > 0");
  if (c == 0.0) return 0.0;
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double s = one_sided_stable_increment(h, c, alpha, rng);
    if (s < cap) return s;
  }
  throw std::runtime_error(
      "truncated stable increment: rejection did not accept (cap far below typical scale)");
}

double stable_remainder_increment(double zeta_plus, double zeta_minus, double h,
                                  double eps_jump, double alpha, Rng& rng) {
  check_alpha(alpha);
  if (zeta_plus < 0.0 || zeta_minus < 0.0) {
    throw std::invalid_argument("stable remainder: weights must be >= 0");
  }
  if (!(eps_jump > 0.0)) throw std::invalid_argument("stable remainder: eps_jump must be > 0");
  double up = 0.0, down = 0.0;
  if (zeta_plus > 0.0) {
    up = truncated_one_sided_stable_increment(h, zeta_plus, alpha, eps_jump, rng);
  }
  if (zeta_minus > 0.0) {
    down = truncated_one_sided_stable_increment(h, zeta_minus, alpha, eps_jump, rng);
  }
  return up - down;
}

double stable_remainder_increment(const StableExampleParams& params, double x, double h,
                                  double eps_jump, Rng& rng) {
  return stable_remainder_increment(zeta_plus(params, x), zeta_minus(params, x), h,
                                    eps_jump, params.alpha, rng);
}

}  // namespace levykde
