#include "levykde/levy_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levykde/normal.hpp"
#include "levykde/stable_sampler.hpp"

namespace levykde {

double levy_density_eval(const LevyModel& model, double x, double y) {
  if (y == 0.0) {
    throw std::domain_error("levy_density_eval: the jump kernel is not defined at y = 0");
  }
  if (!model.levy_density) throw std::invalid_argument("model has no Levy density");
  return model.levy_density(x, y);
}

double tail_mass(const LevyModel& model, double x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("tail_mass: eps must be > 0");
  if (!model.tail_mass) throw std::invalid_argument("model has no tail mass");
  return model.tail_mass(x, eps);
}

double sample_large_jump(const LevyModel& model, double x, double eps, Rng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("sample_large_jump: eps must be > 0");
  if (!model.large_jump) throw std::invalid_argument("model has no large-jump sampler");
  return model.large_jump(x, eps, rng);
}

void StableExampleParams::validate() const {
  if (!(b > 0.0)) throw std::invalid_argument("stable example: b must be > 0");
  if (!(c >= 0.0)) throw std::invalid_argument("stable example: c must be >= 0");
  if (!(xi > 0.0)) throw std::invalid_argument("stable example: xi must be > 0");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("stable example: alpha must lie in (0, 1)");
  }
}

double zeta_plus(const StableExampleParams& p, double x) {
  p.validate();
  if (x <= -p.xi) return 2.0;
  const double ramp = 0.5 * (1.0 + std::cos(std::numbers::pi * x / p.xi));
  if (x <= 0.0) return 2.0 - ramp;
  if (x <= p.xi) return ramp;
  return 0.0;
}

double zeta_minus(const StableExampleParams& p, double x) { return 2.0 - zeta_plus(p, x); }

LevyModel stable_example(const StableExampleParams& p) {
  p.validate();
  LevyModel m;
  m.id = "stable";
  m.stability_index = p.alpha;
  m.activity_index = p.alpha + 0.05;
  m.drift = [b = p.b](double x) { return -b * x; };
  m.diffusion = [c = p.c](double) { return c; };
  m.levy_density = [p](double x, double y) {
    const double weight = y > 0.0 ? zeta_plus(p, x) : zeta_minus(p, x);
    return weight * std::pow(std::abs(y), -1.0 - p.alpha);
  };
  // zeta_plus + zeta_minus == 2 identically, so the tail mass does not
  // depend on x.
  m.tail_mass = [p](double x, double eps) {
    return (zeta_plus(p, x) + zeta_minus(p, x)) * std::pow(eps, -p.alpha) / p.alpha;
  };
  m.large_jump = [p](double x, double eps, Rng& rng) {
    const double zp = zeta_plus(p, x);
    const double sign = (rng.uniform() <= 0.5 * zp) ? 1.0 : -1.0;
    // magnitude eps * U^(-1/alpha), the Pareto law of |J| given |J| > eps;
    // U stays in the open interval so the draw strictly exceeds eps
    const double u = rng.uniform_open();
    return sign * eps * std::pow(u, -1.0 / p.alpha);
  };
  m.small_jump = [p](double x, double h, double eps, Rng& rng) {
    return stable_remainder_increment(p, x, h, eps, rng);
  };
  return m;
}

void CompoundPoissonParams::validate() const {
  if (!(b > 0.0)) throw std::invalid_argument("compound Poisson toy: b must be > 0");
  if (!(c >= 0.0)) throw std::invalid_argument("compound Poisson toy: c must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("compound Poisson toy: lambda must be >= 0");
}

LevyModel compound_poisson_toy(const CompoundPoissonParams& p) {
  p.validate();
  const auto jump_mean_at = [p](double x) {
    return p.jump_mean + p.jump_spread * std::tanh(x);
  };
  LevyModel m;
  m.id = "cpoisson";
  m.stability_index = std::nullopt;
  m.activity_index = 0.0;  // finite activity
  m.drift = [b = p.b](double x) { return -b * x; };
  m.diffusion = [c = p.c](double) { return c; };
  m.levy_density = [p, jump_mean_at](double x, double y) {
    return p.lambda * normal_pdf(y - jump_mean_at(x));
  };
  m.tail_mass = [p, jump_mean_at](double x, double eps) {
    const double mean = jump_mean_at(x);
    const double inside = normal_cdf(eps - mean) - normal_cdf(-eps - mean);
    return p.lambda * (1.0 - inside);
  };
  m.large_jump = [p, jump_mean_at](double x, double eps, Rng& rng) {
    const double mean = jump_mean_at(x);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
      const double j = mean + rng.normal();
      if (std::abs(j) > eps) return j;
    }
    throw std::runtime_error("compound Poisson toy: large-jump rejection stalled");
  };
  m.small_jump = [p, jump_mean_at](double x, double h, double eps, Rng& rng) {
    const double mean = jump_mean_at(x);
    const double inside = normal_cdf(eps - mean) - normal_cdf(-eps - mean);
    const double rate = p.lambda * inside;
    if (rate <= 0.0) return 0.0;
    const std::uint64_t count = rng.poisson(rate * h);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      // jump size conditioned on |J| <= eps
      double j;
      int attempt = 0;
      do {
        j = mean + rng.normal();
        if (++attempt > 1000000) {
          throw std::runtime_error("compound Poisson toy: small-jump rejection stalled");
        }
      } while (std::abs(j) > eps);
      sum += j;
    }
    return sum;
  };
  return m;
}

}  // namespace levykde
