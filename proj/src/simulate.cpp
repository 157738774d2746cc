#include "levykde/simulate.hpp"

#include <cmath>

#include "levykde/rng.hpp"

namespace levykde {

void SimulationScheme::validate() const {
  if (!(t_end > 0.0)) throw std::invalid_argument("scheme: t_end must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("scheme: delta must be > 0");
  if (delta > t_end) throw std::invalid_argument("scheme: delta must not exceed t_end");
  if (substeps < 1) throw std::invalid_argument("scheme: substeps must be >= 1");
  if (!(eps_jump > 0.0)) throw std::invalid_argument("scheme: eps_jump must be > 0");
}

std::pair<SamplePath, JumpLog> simulate_path(const LevyModel& model,
                                             const SimulationScheme& scheme, double x0,
                                             std::uint64_t seed) {
  scheme.validate();
  if (!model.drift || !model.diffusion || !model.tail_mass || !model.large_jump) {
    throw std::invalid_argument("simulate_path: model is missing required callables");
  }
  if (scheme.small_jump_mode == SmallJumpMode::stable_exact && !model.small_jump) {
    throw std::invalid_argument(
        "simulate_path: model has no small-jump sampler; use the neglect mode");
  }

  const auto n_obs = static_cast<std::size_t>(std::llround(scheme.t_end / scheme.delta));
  if (n_obs == 0) throw std::invalid_argument("simulate_path: zero observation steps");
  const std::size_t total_sub = n_obs * static_cast<std::size_t>(scheme.substeps);
  const double h = scheme.delta / scheme.substeps;

  Rng rng(seed);

  SamplePath path;
  path.delta = scheme.delta;
  path.dim = 1;
  path.seed = seed;
  path.values.reserve(n_obs + 1);
  path.values.push_back(x0);

  JumpLog log;
  log.eps_jump = scheme.eps_jump;
  log.substep = h;
  if (scheme.record_fine_grid) {
    log.sojourn_grid.reserve(total_sub + 1);
    log.sojourn_grid.push_back(x0);
  }

  double x = x0;
  for (std::size_t j = 0; j < total_sub; ++j) {
    const double t_left = static_cast<double>(j) * h;
    const double bx = model.drift(x);
    const double cx = model.diffusion(x);
    if (!(cx >= 0.0)) {
      throw SimulationError("simulate_path: negative diffusion coefficient", t_left);
    }

    // Fixed per-substep draw order: Gaussian, jump count, jump marks,
    // small-jump remainder. All increments use the frozen state x.
    const double gaussian = std::sqrt(cx * h) * rng.normal();
    double increment = bx * h + gaussian;

    const double rate = model.tail_mass(x, scheme.eps_jump);
    if (!(rate >= 0.0)) {
      throw SimulationError("simulate_path: negative jump intensity", t_left);
    }
    const std::uint64_t n_jumps = rng.poisson(rate * h);
    for (std::uint64_t i = 0; i < n_jumps; ++i) {
      const double jump = model.large_jump(x, scheme.eps_jump, rng);
      log.events.push_back(JumpEvent{t_left, x, jump});
      increment += jump;
    }

    if (scheme.small_jump_mode == SmallJumpMode::stable_exact) {
      increment += model.small_jump(x, h, scheme.eps_jump, rng);
    }

    x += increment;
    if (!std::isfinite(x)) {
      throw SimulationError("simulate_path: state became non-finite",
                            static_cast<double>(j + 1) * h);
    }
    if (scheme.record_fine_grid) log.sojourn_grid.push_back(x);
    if ((j + 1) % static_cast<std::size_t>(scheme.substeps) == 0) path.values.push_back(x);
  }

  return {std::move(path), std::move(log)};
}

SamplePath downsample(const SamplePath& fine, int keep_every) {
  if (keep_every < 1) throw std::invalid_argument("downsample: keep_every must be >= 1");
  if (fine.dim != 1) throw std::invalid_argument("downsample: only dim == 1 paths");
  if (fine.values.empty()) throw std::invalid_argument("downsample: empty path");
  SamplePath out;
  out.delta = fine.delta * keep_every;
  out.dim = 1;
  out.seed = fine.seed;
  for (std::size_t i = 0; i < fine.values.size(); i += static_cast<std::size_t>(keep_every)) {
    out.values.push_back(fine.values[i]);
  }
  return out;
}

}  // namespace levykde
