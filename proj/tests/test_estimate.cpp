#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "levykde/estimate.hpp"
#include "levykde/levy_model.hpp"
#include "levykde/rng.hpp"
#include "levykde/simulate.hpp"

#include "oracles.hpp"

using namespace levykde;

namespace {

SamplePath benchmark_path() {
  const LevyModel model = stable_example(StableExampleParams{});
  SimulationScheme scheme;
  scheme.t_end = 20.0;
  scheme.delta = 0.01;
  scheme.substeps = 5;
  scheme.eps_jump = 0.05;
  return simulate_path(model, scheme, 0.0, 424242).first;
}

EstimationRequest basic_request(const SamplePath& path, double eta1 = 0.5,
                                double eta2 = 0.4) {
  EstimationRequest req;
  req.observations = &path;
  req.bandwidth = Bandwidth{eta1, eta2};
  return req;
}

}  // namespace

TEST_CASE("single increment gives the closed-form ratio") {
  SamplePath path;
  path.delta = 0.25;
  path.values = {1.0, 1.8};  // one increment of 0.8
  const auto req = basic_request(path, 0.5, 0.4);
  // at (x, y) = (X_0, increment) both kernels sit at their peak:
  // f_hat = g2(0) / (delta eta2)
  const PointEstimate at_peak = estimate_discrete(req, EvalPoint(1.0, 0.8));
  CHECK(at_peak.f_hat == doctest::Approx(0.9375 / (0.25 * 0.4)).epsilon(1e-14));
  CHECK(at_peak.denom == doctest::Approx(0.25 * 0.9375 / 0.5).epsilon(1e-14));
  // off to the side in y the increment weight moves along the profile
  const PointEstimate shifted = estimate_discrete(req, EvalPoint(1.0, 0.6));
  CHECK(shifted.f_hat ==
        doctest::Approx(oracle::biweight(0.5) / (0.25 * 0.4)).epsilon(1e-14));
  // far from the data everything is zero, including the denominator
  const PointEstimate far = estimate_discrete(req, EvalPoint(3.0, 0.8));
  CHECK(far.f_hat == 0.0);
  CHECK(far.denom == 0.0);
}

TEST_CASE("estimator equals the plain-loop reference on a simulated path") {
  const SamplePath path = benchmark_path();
  const auto req = basic_request(path);
  for (double x : {-0.5, 0.0, 0.4, 1.2}) {
    for (double y : {-2.0, -1.0, -0.51, 0.7, 1.0, 1.9}) {
      const PointEstimate est = estimate_discrete(req, EvalPoint(x, y));
      const oracle::NaiveResult ref =
          oracle::naive_estimate(path.values, path.delta, 0.5, 0.4, x, y);
      CHECK(est.f_hat == doctest::Approx(ref.f_hat).epsilon(1e-12));
      CHECK(est.denom == doctest::Approx(ref.denom).epsilon(1e-12));
      CHECK(est.f_hat >= 0.0);
    }
  }
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const SamplePath path = benchmark_path();
  auto req = basic_request(path);
  // interleave x values on purpose: grouping must not reorder results
  const std::vector<std::pair<double, double>> pts = {
      {0.0, 1.0}, {0.4, 1.0}, {0.0, -1.3}, {0.4, 2.2}, {0.0, 0.8}, {-0.2, 1.0}};
  for (const auto& [x, y] : pts) req.grid.emplace_back(x, y);
  const std::vector<PointEstimate> grid = estimate_grid(req);
  REQUIRE(grid.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const PointEstimate one = estimate_discrete(req, req.grid[i]);
    CHECK(grid[i].f_hat == doctest::Approx(one.f_hat).epsilon(1e-13));
    CHECK(grid[i].denom == doctest::Approx(one.denom).epsilon(1e-13));
    CHECK(grid[i].gamma_hat == doctest::Approx(one.gamma_hat).epsilon(1e-12));
  }
}

TEST_CASE("translation invariance of the ratio estimator") {
  const SamplePath path = benchmark_path();
  SamplePath shifted = path;
  for (double& v : shifted.values) v += 3.7;
  const auto req0 = basic_request(path);
  const auto req1 = basic_request(shifted);
  const PointEstimate a = estimate_discrete(req0, EvalPoint(0.2, 1.1));
  const PointEstimate b = estimate_discrete(req1, EvalPoint(0.2 + 3.7, 1.1));
  CHECK(a.f_hat == doctest::Approx(b.f_hat).epsilon(1e-12));
}

TEST_CASE("analytic derivatives match the longhand quotient rule") {
  const SamplePath path = benchmark_path();
  const auto req = basic_request(path);
  for (double x : {0.0, 0.4}) {
    for (double y : {-1.0, 0.9, 1.6}) {
      const EvalPoint pt(x, y);
      // order zero is the estimate itself
      CHECK(derivative_estimate(req, pt, MultiIndex{0}, MultiIndex{0}) ==
            doctest::Approx(estimate_discrete(req, pt).f_hat).epsilon(1e-13));
      for (int k : {1, 2}) {
        const double dx = derivative_estimate(req, pt, MultiIndex{k}, MultiIndex{0});
        const double dy = derivative_estimate(req, pt, MultiIndex{0}, MultiIndex{k});
        CHECK(dx == doctest::Approx(
                        oracle::naive_deriv_x(path.values, path.delta, 0.5, 0.4, x, y, k))
                        .epsilon(1e-10));
        CHECK(dy == doctest::Approx(
                        oracle::naive_deriv_y(path.values, path.delta, 0.5, 0.4, x, y, k))
                        .epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("mixed derivative agrees with finite differences of a pure one") {
  const SamplePath path = benchmark_path();
  const auto req = basic_request(path);
  const double x = 0.2, y = 1.1, h = 1e-5;
  const double mixed = derivative_estimate(req, EvalPoint(x, y), MultiIndex{1}, MultiIndex{1});
  const double up = derivative_estimate(req, EvalPoint(x + h, y), MultiIndex{0}, MultiIndex{1});
  const double dn = derivative_estimate(req, EvalPoint(x - h, y), MultiIndex{0}, MultiIndex{1});
  CHECK(mixed == doctest::Approx((up - dn) / (2.0 * h)).epsilon(1e-5));
}

TEST_CASE("bias correction reproduces the moment-derivative composition") {
  const SamplePath path = benchmark_path();
  const auto req = basic_request(path);
  const double eta1 = 0.5, eta2 = 0.4;
  for (double x : {0.0, 0.4}) {
    for (double y : {-1.2, 1.0}) {
      const EvalPoint pt(x, y);
      // state-weight derivative ratio sum(dg1/dx) / sum(g1), built by hand
      double d0 = 0.0, d1 = 0.0;
      for (std::size_t k = 1; k < path.values.size(); ++k) {
        const double z = (path.values[k - 1] - x) / eta1;
        d0 += oracle::biweight(z) / eta1;
        d1 += -oracle::biweight_d1(z) / (eta1 * eta1);
      }
      REQUIRE(d0 > 0.0);
      const double kappa2 = 1.0 / 7.0;
      const double gamma_x =
          eta1 * eta1 *
          (kappa2 / 2.0 *
               oracle::naive_deriv_x(path.values, path.delta, eta1, eta2, x, y, 2) +
           kappa2 * (d1 / d0) *
               oracle::naive_deriv_x(path.values, path.delta, eta1, eta2, x, y, 1));
      const double gamma_y =
          eta2 * eta2 * kappa2 / 2.0 *
          oracle::naive_deriv_y(path.values, path.delta, eta1, eta2, x, y, 2);
      CHECK(bias_correction_discrete(req, pt) ==
            doctest::Approx(gamma_x + gamma_y).epsilon(1e-10));
    }
  }
}

TEST_CASE("correction requires kernels smooth enough for the plug-in derivatives") {
  const SamplePath path = benchmark_path();
  auto req = basic_request(path);
  req.g1 = KernelSpec::uniform();
  req.g2 = KernelSpec::uniform();
  CHECK_THROWS_AS(bias_correction_discrete(req, EvalPoint(0.0, 1.0)), std::invalid_argument);
  // the plain estimate is still fine with order-0 smoothness
  CHECK_NOTHROW(estimate_discrete(req, EvalPoint(0.0, 1.0)));
}

TEST_CASE("request validation rejects malformed inputs") {
  const SamplePath path = benchmark_path();
  auto req = basic_request(path);
  CHECK_THROWS_AS(estimate_discrete(req, EvalPoint(0.0, 0.0)), std::domain_error);
  req.bandwidth.eta2 = 0.0;
  CHECK_THROWS_AS(estimate_discrete(req, EvalPoint(0.0, 1.0)), std::invalid_argument);
  req = basic_request(path);
  // evaluation point dimension must match the path dimension
  EvalPoint bad;
  bad.x = {0.0, 0.0};
  bad.y = {1.0, 1.0};
  CHECK_THROWS_AS(estimate_discrete(req, bad), std::invalid_argument);
  // fewer than two observations cannot form an increment
  SamplePath tiny;
  tiny.delta = 0.1;
  tiny.values = {1.0};
  auto req_tiny = basic_request(tiny);
  CHECK_THROWS_AS(estimate_discrete(req_tiny, EvalPoint(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("two-dimensional request with a single increment") {
  SamplePath path;
  path.delta = 0.5;
  path.dim = 2;
  path.values = {0.0, 1.0, 0.6, 1.9};  // one increment (0.6, 0.9) from state (0, 1)
  EstimationRequest req;
  req.observations = &path;
  req.bandwidth = Bandwidth{1.0, 1.0};
  req.g1 = KernelSpec::biweight(2);
  req.g2 = KernelSpec::biweight(2);
  EvalPoint pt;
  pt.x = {0.0, 1.0};
  pt.y = {0.5, 1.0};
  // f_hat = g2((0.6,0.9) - (0.5,1.0)) / delta with eta = 1
  const double expect = oracle::biweight(0.1) * oracle::biweight(-0.1) / 0.5;
  CHECK(estimate_discrete(req, pt).f_hat == doctest::Approx(expect).epsilon(1e-13));
  // y at the origin is outside the domain in any dimension
  EvalPoint origin;
  origin.x = {0.0, 1.0};
  origin.y = {0.0, 0.0};
  CHECK_THROWS_AS(estimate_discrete(req, origin), std::domain_error);
  // a single zero component is fine
  EvalPoint off_axis;
  off_axis.x = {0.0, 1.0};
  off_axis.y = {0.0, 0.9};
  CHECK_NOTHROW(estimate_discrete(req, off_axis));
}

TEST_CASE("reliability mask flags the diffusion-dominated band") {
  const SamplePath path = benchmark_path();
  auto req = basic_request(path, 0.5, 0.3);
  req.sigma_at = [](std::span<const double>) { return 1.0; };
  // threshold = eta2 + 5 sigma sqrt(delta) = 0.3 + 0.5 = 0.8
  req.grid.emplace_back(0.0, 0.79);
  req.grid.emplace_back(0.0, -0.79);
  req.grid.emplace_back(0.0, 0.81);
  req.grid.emplace_back(0.0, -0.81);
  const auto out = estimate_grid(req);
  CHECK_FALSE(out[0].reliable);
  CHECK_FALSE(out[1].reliable);
  CHECK(out[2].reliable);
  CHECK(out[3].reliable);
}

TEST_CASE("diffusion scale proxy recovers sigma and shrugs off jumps") {
  Rng rng(5150);
  const double sigma = 0.7, delta = 0.01;
  SamplePath path;
  path.delta = delta;
  path.values.resize(20001);
  double x = 0.0;
  for (double& v : path.values) {
    v = x;
    x += sigma * std::sqrt(delta) * rng.normal();
  }
  const double plain = diffusion_scale_proxy(path);
  CHECK(plain == doctest::Approx(sigma).epsilon(0.05));
  // inject a handful of large jumps; a raw quadratic variation would see
  // 20001 * delta * sigma^2 + 5 * 4 and blow up, the truncated one must not
  SamplePath jumpy = path;
  for (std::size_t k = 2000; k < 20000; k += 4000) {
    for (std::size_t j = k; j < jumpy.values.size(); ++j) jumpy.values[j] += 2.0;
  }
  CHECK(diffusion_scale_proxy(jumpy) == doctest::Approx(sigma).epsilon(0.06));
}

TEST_CASE("continuous-record estimator on a hand-built record") {
  // constant state 0.2 for two time units, one logged jump of size 1
  const double t = 2.0, h = 0.01, eta1 = 0.5, eta2 = 0.3;
  JumpLog log;
  log.eps_jump = 0.05;
  log.substep = h;
  log.sojourn_grid.assign(201, 0.2);
  log.events.push_back(JumpEvent{0.37, 0.2, 1.0});
  const KernelSpec g = KernelSpec::biweight();
  const Bandwidth bw{eta1, eta2};

  const PointEstimate at_jump = estimate_continuous(log, bw, g, g, EvalPoint(0.2, 1.0), t);
  // numerator g1(0)/eta1 * g2(0)/eta2, sojourn integral t g1(0)/eta1
  CHECK(at_jump.f_hat == doctest::Approx(0.9375 / (eta2 * t)).epsilon(1e-12));
  CHECK(at_jump.denom == doctest::Approx(t * 0.9375 / eta1).epsilon(1e-12));
  // on a constant path the state derivatives vanish; what is left is the
  // y-curvature term eta2^2 kappa2/2 g2''(0) / (eta2^3 t)
  CHECK(at_jump.gamma_hat ==
        doctest::Approx((1.0 / 14.0) * (-3.75) / (eta2 * t)).epsilon(1e-12));
  CHECK(bias_correction_continuous(log, bw, g, g, EvalPoint(0.2, 1.0), t) ==
        doctest::Approx(at_jump.gamma_hat).epsilon(1e-14));

  // a jump at a state far from x contributes nothing
  const PointEstimate far = estimate_continuous(log, bw, g, g, EvalPoint(2.0, 1.0), t);
  CHECK(far.f_hat == 0.0);
  CHECK(far.denom == 0.0);

  // events past the horizon are ignored
  JumpLog late = log;
  late.events.push_back(JumpEvent{2.1, 0.2, 1.0});
  const PointEstimate same = estimate_continuous(late, bw, g, g, EvalPoint(0.2, 1.0), t);
  CHECK(same.f_hat == doctest::Approx(at_jump.f_hat).epsilon(1e-14));

  // |y| too close to the jump threshold is rejected outright
  CHECK_THROWS_AS(estimate_continuous(log, bw, g, g, EvalPoint(0.2, 0.34), t),
                  std::invalid_argument);
  // and so is a record without a sojourn grid
  JumpLog bare = log;
  bare.sojourn_grid.clear();
  CHECK_THROWS_AS(estimate_continuous(bare, bw, g, g, EvalPoint(0.2, 1.0), t),
                  std::invalid_argument);
}

TEST_CASE("continuous estimator averages the sojourn-weighted jumps") {
  // state alternates between 0 and 1 on the fine grid; only the jump logged
  // from the state near x should enter the numerator
  const double t = 1.0, h = 0.1;
  JumpLog log;
  log.eps_jump = 0.05;
  log.substep = h;
  log.sojourn_grid = {0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0};
  log.events.push_back(JumpEvent{0.25, 0.0, 0.8});
  log.events.push_back(JumpEvent{0.55, 1.0, 0.8});
  const KernelSpec g = KernelSpec::biweight();
  const Bandwidth bw{0.5, 0.4};
  const PointEstimate est = estimate_continuous(log, bw, g, g, EvalPoint(0.0, 0.8), t);
  // trapezoid: half-weight endpoints are both 0-states
  // integral = h * (g(0) * (1/2 + 4 + 1/2) + 0 * 5) / eta1
  const double denom = 0.1 * (0.9375 / 0.5) * 5.0;
  CHECK(est.denom == doctest::Approx(denom).epsilon(1e-12));
  CHECK(est.f_hat == doctest::Approx((0.9375 / 0.5) * (0.9375 / 0.4) / denom).epsilon(1e-12));
}
