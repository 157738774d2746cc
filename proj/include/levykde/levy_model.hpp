#pragma once

#include <functional>
#include <optional>
#include <string>

#include "levykde/rng.hpp"

namespace levykde {

// Characteristics of a univariate Markovian jump diffusion together with the
// sampling hooks the simulator needs. drift and diffusion are the
// coefficients of dX = b(X) dt + sqrt(c(X)) dW + jumps; levy_density is the
// jump kernel f(x, y) in dy.
struct LevyModel {
  std::string id;
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  std::function<double(double, double)> levy_density;

  // alpha when the small-jump behaviour is stable-like; empty for finite
  // activity.
  std::optional<double> stability_index;
  // beta with sup_x integral of (|y|^beta ^ 1) f(x, y) dy finite.
  double activity_index = 0.0;

  // integral of f(x, y) over |y| > eps.
  std::function<double(double, double)> tail_mass;
  // One jump with |J| > eps at state x.
  std::function<double(double, double, Rng&)> large_jump;
  // Aggregate of jumps with |J| <= eps over a step of length h at frozen
  // state x; empty when the model has no exact small-jump sampler.
  std::function<double(double, double, double, Rng&)> small_jump;
};

// Checked wrappers around the model callables.
double levy_density_eval(const LevyModel&, double x, double y);   // y == 0 is a domain error
double tail_mass(const LevyModel&, double x, double eps);         // eps must be > 0
double sample_large_jump(const LevyModel&, double x, double eps, Rng&);

// The benchmark model: mean-reverting diffusion with an alpha-stable-like
// jump kernel f(x, y) = (zeta_plus(x) 1{y>0} + zeta_minus(x) 1{y<0}) |y|^(-1-alpha)
// whose positive weight ramps down over [-xi, xi] via a raised cosine.
struct StableExampleParams {
  double b = 1.0;
  double c = 1.0;
  double xi = 3.0;
  double alpha = 0.9;
  void validate() const;  // throws std::invalid_argument
};

double zeta_plus(const StableExampleParams&, double x);
double zeta_minus(const StableExampleParams&, double x);
LevyModel stable_example(const StableExampleParams&);

// Finite-activity toy with Gaussian jump sizes: f(x, y) = lambda * phi(y - m(x)),
// m(x) = jump_mean + jump_spread * tanh(x). Everything about it is closed
// form, which makes it the model of choice for consistency and rate checks.
struct CompoundPoissonParams {
  double b = 1.0;
  double c = 0.25;
  double lambda = 2.0;
  double jump_mean = 1.0;
  double jump_spread = 0.5;
  void validate() const;
};

LevyModel compound_poisson_toy(const CompoundPoissonParams&);

}  // namespace levykde
