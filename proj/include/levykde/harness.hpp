#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levykde/estimate.hpp"
#include "levykde/inference.hpp"
#include "levykde/levy_model.hpp"
#include "levykde/simulate.hpp"

#include <json.hpp>

namespace levykde {

// Evaluation grid: a list of state points x and a symmetric-capable band of
// jump sizes. Generated y values skip |y| < floor; without an explicit
// floor, the diffusion-noise threshold of the model is used.
struct GridSpec {
  std::vector<double> x{0.0};
  double y_min = 0.3;
  double y_max = 4.0;
  double y_step = 0.05;
  bool mirror = true;
  std::optional<double> floor;
  std::vector<double> y_values(double default_floor) const;
};

struct ModelConfig {
  std::string type = "stable";  // "stable" or "cpoisson"
  StableExampleParams stable;
  CompoundPoissonParams cpoisson;
  LevyModel build() const;
  double diffusion_coefficient() const;  // the constant c of either model
};

struct ScenarioConfig {
  std::string name = "custom";
  ModelConfig model;
  double x0 = 0.0;
  SimulationScheme scheme;
  std::vector<Bandwidth> bandwidths{{0.4, 0.4}};
  std::string kernel1 = "biweight";
  std::string kernel2 = "biweight";
  Smoothness smoothness;
  GridSpec grid;
  int trajectories = 1;
  std::uint64_t base_seed = 0;
  bool seed_set = false;  // experiments refuse to run without an explicit seed
  double level = 0.95;
  IntervalMethod method = IntervalMethod::inversion;
  bool subtract_bias = true;
  int workers = 1;
  std::string out_dir = "out";

  static ScenarioConfig from_json(const nlohmann::json&);
  nlohmann::json to_json() const;
  static ScenarioConfig preset(const std::string& name);
  // Hash of the canonical JSON dump; stamped into every output file.
  std::string config_hash() const;
};

// One estimate row as written to results files.
struct EstimateRow {
  double x = 0.0;
  double y = 0.0;
  double f_true = 0.0;
  double f_hat = 0.0;
  double gamma_hat = 0.0;
  double denom = 0.0;
  bool reliable = true;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool ci_empty = false;
};

// Estimates with intervals over the configured grid for one trajectory and
// one bandwidth pair. Pure: no file output.
std::vector<EstimateRow> estimate_trajectory(const LevyModel&, const SamplePath&,
                                             const ScenarioConfig&, const Bandwidth&);

struct RunOutputs {
  std::vector<std::filesystem::path> files;
};

// Simulates one trajectory under the base seed, estimates over the grid for
// each bandwidth pair, and writes path, results, plot-data and manifest
// files into out_dir.
RunOutputs run_scenario(const ScenarioConfig&);

struct CoverageRow {
  double x = 0.0;
  double y = 0.0;
  double f_true = 0.0;
  double coverage = 0.0;
  double mean_estimate = 0.0;
  double mean_lo = 0.0;
  double mean_hi = 0.0;
  double rmse = 0.0;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;  // grid-major, one block per bandwidth pair
  std::vector<Bandwidth> bandwidths;
  std::size_t per_bandwidth = 0;  // rows per bandwidth block
};

// Repeats trajectory simulation + estimation over config.trajectories seeds
// (base_seed + i), in parallel across workers, and aggregates interval
// coverage against the model's true kernel density. Results do not depend
// on the worker count.
CoverageReport coverage_study(const ScenarioConfig&);

// Writes a coverage report; one csv per bandwidth pair plus the manifest.
RunOutputs write_coverage(const CoverageReport&, const ScenarioConfig&);

// Per-x plot files (y, truth, raw and corrected estimates, interval, mask)
// from estimate rows. Returns the file paths written.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<EstimateRow>&,
                                                  const ScenarioConfig&, const Bandwidth&,
                                                  const std::filesystem::path& dir,
                                                  const std::string& tag);

}  // namespace levykde
