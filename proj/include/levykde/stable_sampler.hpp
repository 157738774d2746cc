#pragma once

#include "levykde/levy_model.hpp"
#include "levykde/rng.hpp"

namespace levykde {

// Kanter's representation of the one-sided alpha-stable law with Laplace
// transform E exp(-u S) = exp(-u^alpha), 0 < alpha < 1:
//   S = (A(pi U) / W^(1-alpha))^(1/alpha),
//   A(x) = sin((1-alpha) x)^(1-alpha) sin(alpha x)^alpha / sin(x),
// with U uniform on (0,1) and W standard exponential.
double standard_one_sided_stable(double alpha, Rng&);

// Increment over time h of the subordinator with Levy density
// c * y^(-1-alpha) on y > 0, i.e. scale (h c Gamma(1-alpha) / alpha)^(1/alpha)
// times a standard draw.
double one_sided_stable_increment(double h, double c, double alpha, Rng&);

// Same increment conditioned on being < cap, by rejection. Throws
// std::runtime_error if the acceptance region is effectively unreachable.
double truncated_one_sided_stable_increment(double h, double c, double alpha, double cap,
                                            Rng&);

// Compensator-free small-jump remainder for a two-sided kernel
// (zp 1{y>0} + zm 1{y<0}) |y|^(-1-alpha): the difference of two independent
// one-sided increments, each conditioned below eps_jump. Requires alpha < 1,
// where the small jumps are summable and no centering is needed.
double stable_remainder_increment(double zeta_plus, double zeta_minus, double h,
                                  double eps_jump, double alpha, Rng&);

// Convenience overload evaluating the state-dependent weights of the
// benchmark model at x.
double stable_remainder_increment(const StableExampleParams&, double x, double h,
                                  double eps_jump, Rng&);

}  // namespace levykde
