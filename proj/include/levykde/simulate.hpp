#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "levykde/levy_model.hpp"

namespace levykde {

enum class SmallJumpMode { stable_exact, neglect };

// Euler scheme layout: observations are delta apart, each observation step is
// refined into substeps internal steps with the coefficients frozen at the
// substep's left endpoint. Jumps larger than eps_jump are sampled one by one
// (thinning) and logged; the sub-eps activity is covered by the model's
// small-jump sampler or dropped entirely.
struct SimulationScheme {
  double t_end = 100.0;
  double delta = 0.01;
  int substeps = 10;
  double eps_jump = 0.05;
  SmallJumpMode small_jump_mode = SmallJumpMode::stable_exact;
  bool record_fine_grid = false;
  void validate() const;  // throws std::invalid_argument
};

// Observations X_0, X_delta, ..., X_{n delta}, flattened row-major for
// dim > 1 (the simulator itself only produces dim == 1).
struct SamplePath {
  double delta = 0.0;
  int dim = 1;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t size() const { return dim > 0 ? values.size() / static_cast<std::size_t>(dim) : 0; }
};

struct JumpEvent {
  double time;        // left endpoint of the substep carrying the jump
  double left_limit;  // state the jump was sampled from
  double jump;
};

struct JumpLog {
  double eps_jump = 0.0;
  std::vector<JumpEvent> events;  // nondecreasing in time, |jump| > eps_jump
  // States at substep resolution when record_fine_grid is set; spacing
  // substep. Used for sojourn-time integrals of the continuous-record
  // estimator.
  std::vector<double> sojourn_grid;
  double substep = 0.0;
};

struct SimulationError : std::runtime_error {
  double time;
  SimulationError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

// Runs the scheme from x0 under the given seed. Bit-identical across runs
// for identical inputs; distinct seeds use decorrelated streams.
std::pair<SamplePath, JumpLog> simulate_path(const LevyModel&, const SimulationScheme&,
                                             double x0, std::uint64_t seed);

// Keeps indices 0, keep_every, 2*keep_every, ... from a finer path.
SamplePath downsample(const SamplePath& fine, int keep_every);

}  // namespace levykde
