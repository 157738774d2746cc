#include <doctest.h>

#include <cmath>
#include <vector>

#include "levykde/levy_model.hpp"
#include "levykde/rng.hpp"
#include "levykde/simulate.hpp"
#include "levykde/stable_sampler.hpp"

#include "oracles.hpp"

using namespace levykde;

namespace {

SimulationScheme quick_scheme(double t, double delta, int substeps, double eps,
                              SmallJumpMode mode) {
  SimulationScheme s;
  s.t_end = t;
  s.delta = delta;
  s.substeps = substeps;
  s.eps_jump = eps;
  s.small_jump_mode = mode;
  return s;
}

}  // namespace

TEST_CASE("pure drift reduces to the deterministic Euler recursion") {
  CompoundPoissonParams p;
  p.c = 0.0;
  p.lambda = 0.0;
  const LevyModel model = compound_poisson_toy(p);
  const auto scheme = quick_scheme(1.0, 0.1, 10, 0.5, SmallJumpMode::stable_exact);
  const auto [path, log] = simulate_path(model, scheme, 1.0, 9);
  CHECK(path.size() == 11);
  CHECK(log.events.empty());
  // dX = -X dt frozen per substep of h = 0.01: X multiplies by (1 - h)
  const double h = 0.01;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double expect = std::pow(1.0 - h, static_cast<double>(10 * k));
    CHECK(path.values[k] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("same seed gives a bit-identical path, different seed does not") {
  const LevyModel model = stable_example(StableExampleParams{});
  const auto scheme = quick_scheme(5.0, 0.01, 5, 0.1, SmallJumpMode::stable_exact);
  const auto [p1, l1] = simulate_path(model, scheme, 0.3, 12345);
  const auto [p2, l2] = simulate_path(model, scheme, 0.3, 12345);
  CHECK(p1.values == p2.values);
  CHECK(l1.events.size() == l2.events.size());
  for (std::size_t i = 0; i < l1.events.size(); ++i) {
    CHECK(l1.events[i].time == l2.events[i].time);
    CHECK(l1.events[i].left_limit == l2.events[i].left_limit);
    CHECK(l1.events[i].jump == l2.events[i].jump);
  }
  const auto [p3, l3] = simulate_path(model, scheme, 0.3, 54321);
  CHECK(p1.values != p3.values);
}

TEST_CASE("logged jump count and magnitudes match the driving measure") {
  // the benchmark model has state-independent total intensity
  // 2 eps^-alpha / alpha, so the event count is exactly Poisson(rate * t)
  const LevyModel model = stable_example(StableExampleParams{});
  const double eps = 0.5, alpha = 0.9, t = 50.0;
  const auto scheme = quick_scheme(t, 0.01, 5, eps, SmallJumpMode::neglect);
  const auto [path, log] = simulate_path(model, scheme, 0.0, 31337);
  const double rate = 2.0 / alpha * std::pow(eps, -alpha);
  const double expect = rate * t;
  CHECK(std::abs(static_cast<double>(log.events.size()) - expect) <
        3.0 * std::sqrt(expect));
  // |J| is Pareto(alpha) beyond eps regardless of state
  std::vector<double> magnitudes;
  for (const auto& ev : log.events) {
    CHECK(std::abs(ev.jump) > eps);
    CHECK(ev.time >= 0.0);
    CHECK(ev.time < t);
    magnitudes.push_back(std::abs(ev.jump));
  }
  const double d = oracle::ks_statistic(magnitudes, [&](double m) {
    return m <= eps ? 0.0 : 1.0 - std::pow(eps / m, alpha);
  });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(magnitudes.size())));
  // event times are nondecreasing
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    CHECK(log.events[i].time >= log.events[i - 1].time);
  }
}

TEST_CASE("standard one-sided stable matches its Laplace transform") {
  for (double alpha : {0.3, 0.5, 0.9}) {
    const int n = 40000;
    for (double lambda : {0.5, 1.0, 2.0}) {
      Rng rng2(static_cast<std::uint64_t>(1000 * alpha) + static_cast<std::uint64_t>(10 * lambda));
      double mean = 0.0;
      for (int i = 0; i < n; ++i) mean += std::exp(-lambda * standard_one_sided_stable(alpha, rng2));
      mean /= n;
      const double expect = std::exp(-std::pow(lambda, alpha));
      // bounded in [0,1], so 4 standard errors stay below 0.01
      CHECK(mean == doctest::Approx(expect).epsilon(0.0).scale(1.0).epsilon(0.01));
    }
  }
}

TEST_CASE("one-sided stable draws at alpha = 1/2 follow the closed-form cdf") {
  // E exp(-u S) = exp(-sqrt(u)) is the Levy distribution with
  // cdf F(s) = erfc(1 / (2 sqrt(s)))
  Rng rng(808);
  const int n = 20000;
  std::vector<double> sample(n);
  for (double& v : sample) v = standard_one_sided_stable(0.5, rng);
  const double d = oracle::ks_statistic(sample, [](double s) {
    return s <= 0.0 ? 0.0 : std::erfc(1.0 / (2.0 * std::sqrt(s)));
  });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("subordinator increment carries the advertised scale") {
  // increment = sigma * S with sigma = (h c Gamma(1-alpha)/alpha)^(1/alpha),
  // so E exp(-lambda inc) = exp(-h c Gamma(1-alpha)/alpha * lambda^alpha)
  const double h = 0.01, c = 1.3, alpha = 0.9;
  Rng rng(4242);
  const int n = 40000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += std::exp(-one_sided_stable_increment(h, c, alpha, rng));
  mean /= n;
  const double expect = std::exp(-h * c * std::tgamma(1.0 - alpha) / alpha);
  CHECK(mean == doctest::Approx(expect).epsilon(0.0).scale(1.0).epsilon(0.005));
  // zero weight gives a zero increment and consumes no randomness
  Rng r1(5), r2(5);
  CHECK(one_sided_stable_increment(h, 0.0, alpha, r1) == 0.0);
  CHECK(r1.next_u64() == r2.next_u64());
}

TEST_CASE("conditioned increment at alpha = 1/2 follows the truncated Levy law") {
  const double h = 0.01, c = 1.0, alpha = 0.5, cap = 0.05;
  const double sigma = std::pow(h * c * std::tgamma(0.5) / alpha, 1.0 / alpha);
  const auto cdf_full = [&](double x) {
    return x <= 0.0 ? 0.0 : std::erfc(std::sqrt(sigma) / (2.0 * std::sqrt(x)));
  };
  Rng rng(912);
  const int n = 20000;
  std::vector<double> sample(n);
  for (double& v : sample) {
    v = truncated_one_sided_stable_increment(h, c, alpha, cap, rng);
    CHECK(v > 0.0);
    CHECK(v < cap);
  }
  const double total = cdf_full(cap);
  CHECK(total < 0.95);  // the conditioning actually bites at these parameters
  const double d =
      oracle::ks_statistic(sample, [&](double x) { return cdf_full(std::min(x, cap)) / total; });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("small-jump remainder is symmetric under balanced weights") {
  // zeta_plus = zeta_minus makes the remainder a difference of iid draws
  const double h = 0.01, eps = 0.05, alpha = 0.5;
  Rng rng(7311);
  const int n = 40000;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = stable_remainder_increment(1.0, 1.0, h, eps, alpha, rng);
    CHECK(std::abs(r) < 2.0 * eps);  // difference of two sub-eps draws
    mean += r;
    m2 += r * r;
  }
  mean /= n;
  const double var = m2 / n - mean * mean;
  // moments of one conditioned draw from the closed-form Levy density
  const double sigma = std::pow(h * std::tgamma(0.5) / alpha, 1.0 / alpha);
  const auto density = [&](double x) {
    return std::sqrt(sigma) / (2.0 * std::sqrt(3.141592653589793)) * std::pow(x, -1.5) *
           std::exp(-sigma / (4.0 * x));
  };
  const double mass = std::erfc(std::sqrt(sigma) / (2.0 * std::sqrt(eps)));
  const double e1 =
      oracle::simpson([&](double x) { return x * density(x); }, eps * 1e-7, eps, 20000) / mass;
  const double e2 =
      oracle::simpson([&](double x) { return x * x * density(x); }, eps * 1e-7, eps, 20000) /
      mass;
  const double var_expect = 2.0 * (e2 - e1 * e1);
  CHECK(std::abs(mean) < 4.0 * std::sqrt(var_expect / n));
  CHECK(var == doctest::Approx(var_expect).epsilon(0.05));
}

TEST_CASE("state-dependent weights skew the remainder the right way") {
  // all mass on the positive side gives a positive remainder, and vice versa
  const double h = 0.01, eps = 0.05, alpha = 0.5;
  Rng rng(88);
  for (int i = 0; i < 200; ++i) {
    CHECK(stable_remainder_increment(2.0, 0.0, h, eps, alpha, rng) > 0.0);
    CHECK(stable_remainder_increment(0.0, 2.0, h, eps, alpha, rng) < 0.0);
  }
}

TEST_CASE("neglect mode drops exactly the sub-threshold activity") {
  // with no diffusion the path must replay from drift plus logged jumps
  StableExampleParams p;
  p.c = 0.0;
  const LevyModel model = stable_example(p);
  const auto scheme = quick_scheme(20.0, 0.01, 5, 0.1, SmallJumpMode::neglect);
  const auto [path, log] = simulate_path(model, scheme, 0.5, 2718);
  const double h = scheme.delta / scheme.substeps;
  double x = 0.5;
  std::size_t ptr = 0;
  std::size_t obs = 1;
  for (std::size_t j = 0; j < 20.0 / h; ++j) {
    const double t_left = static_cast<double>(j) * h;
    double inc = model.drift(x) * h + 0.0;
    while (ptr < log.events.size() && log.events[ptr].time == t_left) {
      CHECK(log.events[ptr].left_limit == x);
      inc += log.events[ptr].jump;
      ++ptr;
    }
    x += inc;
    if ((j + 1) % 5 == 0) {
      REQUIRE(obs < path.values.size());
      CHECK(path.values[obs] == x);  // bitwise: same operations in the same order
      ++obs;
    }
  }
  CHECK(ptr == log.events.size());
}

TEST_CASE("exact small-jump mode adds activity the neglect mode lacks") {
  StableExampleParams p;
  p.c = 0.0;
  const LevyModel model = stable_example(p);
  const auto scheme_exact = quick_scheme(2.0, 0.01, 5, 0.1, SmallJumpMode::stable_exact);
  const auto scheme_skip = quick_scheme(2.0, 0.01, 5, 0.1, SmallJumpMode::neglect);
  const auto [pe, le] = simulate_path(model, scheme_exact, 0.5, 99);
  const auto [ps, ls] = simulate_path(model, scheme_skip, 0.5, 99);
  CHECK(pe.values != ps.values);
}

TEST_CASE("fine grid records every substep") {
  const LevyModel model = stable_example(StableExampleParams{});
  auto scheme = quick_scheme(1.0, 0.01, 4, 0.1, SmallJumpMode::stable_exact);
  scheme.record_fine_grid = true;
  const auto [path, log] = simulate_path(model, scheme, 0.0, 5);
  CHECK(log.sojourn_grid.size() == 401);
  CHECK(log.substep == doctest::Approx(0.0025));
  CHECK(log.sojourn_grid.front() == 0.0);
  for (std::size_t k = 0; k < path.size(); ++k) {
    CHECK(log.sojourn_grid[4 * k] == path.values[k]);
  }
}

TEST_CASE("downsampling keeps every m-th observation") {
  SamplePath fine;
  fine.delta = 0.5;
  fine.values = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const SamplePath coarse = downsample(fine, 3);
  CHECK(coarse.delta == doctest::Approx(1.5));
  CHECK(coarse.values == std::vector<double>{0.0, 3.0, 6.0});
  CHECK_THROWS_AS(downsample(fine, 0), std::invalid_argument);
}

TEST_CASE("scheme validation and failure reporting") {
  const LevyModel model = stable_example(StableExampleParams{});
  SimulationScheme bad;
  bad.delta = -0.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SimulationScheme{};
  bad.delta = 2.0 * bad.t_end;
  CHECK_THROWS_AS(simulate_path(model, bad, 0.0, 1), std::invalid_argument);

  // a model without a small-jump sampler cannot run in exact mode
  LevyModel bare = model;
  bare.small_jump = nullptr;
  const auto scheme = quick_scheme(1.0, 0.01, 2, 0.1, SmallJumpMode::stable_exact);
  CHECK_THROWS_AS(simulate_path(bare, scheme, 0.0, 1), std::invalid_argument);
  const auto ok = quick_scheme(1.0, 0.01, 2, 0.1, SmallJumpMode::neglect);
  CHECK_NOTHROW(simulate_path(bare, ok, 0.0, 1));

  // explosive dynamics surface as a simulation error with a time stamp
  LevyModel explosive = bare;
  explosive.drift = [](double x) { return 1e200 * (x + 1.0); };
  explosive.diffusion = [](double) { return 0.0; };
  explosive.tail_mass = [](double, double) { return 0.0; };
  try {
    simulate_path(explosive, ok, 1.0, 1);
    FAIL("expected a SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.time >= 0.0);
    CHECK(e.time <= 1.0);
  }
}
