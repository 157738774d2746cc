#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "levykde/kernels.hpp"
#include "levykde/multi_index.hpp"
#include "levykde/simulate.hpp"

namespace levykde {

// Derivative orders the bias correction plugs in: alpha1 for the state
// coordinate, alpha2 for the jump coordinate. Both must be covered by the
// kernel orders.
struct Smoothness {
  int alpha1 = 2;
  int alpha2 = 2;
};

// One evaluation point (x, y); coordinates are dim-long, y never the origin.
struct EvalPoint {
  std::vector<double> x;
  std::vector<double> y;
  EvalPoint() = default;
  EvalPoint(double x1, double y1) : x{x1}, y{y1} {}
};

struct EstimationRequest {
  const SamplePath* observations = nullptr;
  Bandwidth bandwidth;
  KernelSpec g1 = KernelSpec::biweight();
  KernelSpec g2 = KernelSpec::biweight();
  std::vector<EvalPoint> grid;
  Smoothness smoothness;
  // Diffusion scale sqrt(c(x)) used by the reliability mask; estimated from
  // the increments when absent.
  std::function<double(std::span<const double>)> sigma_at;
  double reliability_zeta = 5.0;
};

struct PointEstimate {
  double f_hat = 0.0;
  double gamma_hat = 0.0;
  // delta times the summed g1 weights (the studentization in the inference
  // module consumes exactly this).
  double denom = 0.0;
  // false when |y| is within eta2 + zeta sigma sqrt(delta) of the origin,
  // where increments are dominated by diffusion rather than jumps.
  bool reliable = true;
};

// Ratio estimator from discrete observations: the summed product of state
// weights and increment weights over delta times the summed state weights;
// 0 when no observation carries weight.
PointEstimate estimate_discrete(const EstimationRequest&, const EvalPoint&);

// All grid points of the request, reusing the per-x weight pass across the
// y values that share it. Output order follows the grid.
std::vector<PointEstimate> estimate_grid(const EstimationRequest&);

// Analytic partial derivative of the ratio estimator, order m1 in x and m2
// in y. Exact (quotient rule), not a finite difference.
double derivative_estimate(const EstimationRequest&, const EvalPoint&, const MultiIndex& m1,
                           const MultiIndex& m2);

// Plug-in correction of the leading smoothing bias: kernel moments times
// estimated derivatives, scaled by eta1^alpha1 and eta2^alpha2.
double bias_correction_discrete(const EstimationRequest&, const EvalPoint&);

// Continuous-record benchmark computed from the logged jumps and the
// sojourn-time integral of the state weights (trapezoid on the fine grid).
// Requires |y| > eps_jump + eta2 so no sub-threshold jump can reach the
// increment window.
PointEstimate estimate_continuous(const JumpLog&, const Bandwidth&, const KernelSpec& g1,
                                  const KernelSpec& g2, const EvalPoint&, double t,
                                  const Smoothness& = {});

double bias_correction_continuous(const JumpLog&, const Bandwidth&, const KernelSpec& g1,
                                  const KernelSpec& g2, const EvalPoint&, double t,
                                  const Smoothness& = {});

// Robust diffusion-scale estimate from the increments: a median-calibrated
// truncated quadratic variation.
double diffusion_scale_proxy(const SamplePath&);

}  // namespace levykde
