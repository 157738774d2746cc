#include "levykde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "levykde/bandwidth.hpp"
#include "levykde/io.hpp"
#include "levykde/version.hpp"

namespace levykde {

namespace {

std::string method_name(IntervalMethod m) {
  return m == IntervalMethod::wald ? "wald" : "inversion";
}

IntervalMethod method_from_name(const std::string& s) {
  if (s == "wald") return IntervalMethod::wald;
  if (s == "inversion") return IntervalMethod::inversion;
  throw std::invalid_argument("unknown interval method: " + s);
}

std::string mode_name(SmallJumpMode m) {
  return m == SmallJumpMode::stable_exact ? "stable_exact" : "neglect";
}

SmallJumpMode mode_from_name(const std::string& s) {
  if (s == "stable_exact") return SmallJumpMode::stable_exact;
  if (s == "neglect") return SmallJumpMode::neglect;
  throw std::invalid_argument("unknown small-jump mode: " + s);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace

std::vector<double> GridSpec::y_values(double default_floor) const {
  if (!(y_step > 0.0)) throw std::invalid_argument("grid: y_step must be > 0");
  if (!(y_min > 0.0) || y_max < y_min) {
    throw std::invalid_argument("grid: need 0 < y_min <= y_max");
  }
  const double lo = floor.value_or(default_floor);
  std::vector<double> ys;
  const auto count = static_cast<std::size_t>(std::floor((y_max - y_min) / y_step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    const double y = y_min + static_cast<double>(i) * y_step;
    if (y < lo) continue;
    ys.push_back(y);
  }
  if (mirror) {
    std::vector<double> full;
    full.reserve(2 * ys.size());
    for (auto it = ys.rbegin(); it != ys.rend(); ++it) full.push_back(-*it);
    full.insert(full.end(), ys.begin(), ys.end());
    return full;
  }
  return ys;
}

LevyModel ModelConfig::build() const {
  if (type == "stable") return stable_example(stable);
  if (type == "cpoisson") return compound_poisson_toy(cpoisson);
  throw std::invalid_argument("unknown model type: " + type);
}

double ModelConfig::diffusion_coefficient() const {
  if (type == "stable") return stable.c;
  if (type == "cpoisson") return cpoisson.c;
  throw std::invalid_argument("unknown model type: " + type);
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  cfg.name = j.value("name", cfg.name);
  if (j.contains("model")) {
    const auto& m = j.at("model");
    cfg.model.type = m.value("type", cfg.model.type);
    if (cfg.model.type == "stable") {
      cfg.model.stable.b = m.value("b", cfg.model.stable.b);
      cfg.model.stable.c = m.value("c", cfg.model.stable.c);
      cfg.model.stable.xi = m.value("xi", cfg.model.stable.xi);
      cfg.model.stable.alpha = m.value("alpha", cfg.model.stable.alpha);
    } else if (cfg.model.type == "cpoisson") {
      cfg.model.cpoisson.b = m.value("b", cfg.model.cpoisson.b);
      cfg.model.cpoisson.c = m.value("c", cfg.model.cpoisson.c);
      cfg.model.cpoisson.lambda = m.value("lambda", cfg.model.cpoisson.lambda);
      cfg.model.cpoisson.jump_mean = m.value("jump_mean", cfg.model.cpoisson.jump_mean);
      cfg.model.cpoisson.jump_spread =
          m.value("jump_spread", cfg.model.cpoisson.jump_spread);
    } else {
      throw std::invalid_argument("unknown model type: " + cfg.model.type);
    }
  }
  cfg.x0 = j.value("x0", cfg.x0);
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    cfg.scheme.t_end = s.value("t_end", cfg.scheme.t_end);
    cfg.scheme.delta = s.value("delta", cfg.scheme.delta);
    cfg.scheme.substeps = s.value("substeps", cfg.scheme.substeps);
    cfg.scheme.eps_jump = s.value("eps_jump", cfg.scheme.eps_jump);
    cfg.scheme.small_jump_mode =
        mode_from_name(s.value("small_jumps", mode_name(cfg.scheme.small_jump_mode)));
    cfg.scheme.record_fine_grid = s.value("record_fine_grid", cfg.scheme.record_fine_grid);
  }
  if (j.contains("estimate")) {
    const auto& e = j.at("estimate");
    if (e.contains("bandwidths")) {
      cfg.bandwidths.clear();
      for (const auto& pair : e.at("bandwidths")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw std::invalid_argument("bandwidths must be [eta1, eta2] pairs");
        }
        cfg.bandwidths.push_back(Bandwidth{pair[0].get<double>(), pair[1].get<double>()});
      }
    }
    cfg.kernel1 = e.value("kernel1", cfg.kernel1);
    cfg.kernel2 = e.value("kernel2", cfg.kernel2);
    cfg.smoothness.alpha1 = e.value("alpha1", cfg.smoothness.alpha1);
    cfg.smoothness.alpha2 = e.value("alpha2", cfg.smoothness.alpha2);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("x")) cfg.grid.x = g.at("x").get<std::vector<double>>();
    cfg.grid.y_min = g.value("y_min", cfg.grid.y_min);
    cfg.grid.y_max = g.value("y_max", cfg.grid.y_max);
    cfg.grid.y_step = g.value("y_step", cfg.grid.y_step);
    cfg.grid.mirror = g.value("mirror", cfg.grid.mirror);
    if (g.contains("floor")) cfg.grid.floor = g.at("floor").get<double>();
  }
  if (j.contains("mc")) {
    const auto& m = j.at("mc");
    cfg.trajectories = m.value("count", cfg.trajectories);
    if (m.contains("base_seed")) {
      cfg.base_seed = m.at("base_seed").get<std::uint64_t>();
      cfg.seed_set = true;
    }
    cfg.level = m.value("level", cfg.level);
    cfg.method = method_from_name(m.value("method", method_name(cfg.method)));
    cfg.subtract_bias = m.value("subtract_bias", cfg.subtract_bias);
    cfg.workers = m.value("workers", cfg.workers);
  }
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  return cfg;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  nlohmann::json m;
  m["type"] = model.type;
  if (model.type == "stable") {
    m["b"] = model.stable.b;
    m["c"] = model.stable.c;
    m["xi"] = model.stable.xi;
    m["alpha"] = model.stable.alpha;
  } else {
    m["b"] = model.cpoisson.b;
    m["c"] = model.cpoisson.c;
    m["lambda"] = model.cpoisson.lambda;
    m["jump_mean"] = model.cpoisson.jump_mean;
    m["jump_spread"] = model.cpoisson.jump_spread;
  }
  j["model"] = m;
  j["x0"] = x0;
  j["sim"] = {{"t_end", scheme.t_end},
              {"delta", scheme.delta},
              {"substeps", scheme.substeps},
              {"eps_jump", scheme.eps_jump},
              {"small_jumps", mode_name(scheme.small_jump_mode)},
              {"record_fine_grid", scheme.record_fine_grid}};
  nlohmann::json bws = nlohmann::json::array();
  for (const auto& bw : bandwidths) bws.push_back({bw.eta1, bw.eta2});
  j["estimate"] = {{"bandwidths", bws},
                   {"kernel1", kernel1},
                   {"kernel2", kernel2},
                   {"alpha1", smoothness.alpha1},
                   {"alpha2", smoothness.alpha2}};
  nlohmann::json g;
  g["x"] = grid.x;
  g["y_min"] = grid.y_min;
  g["y_max"] = grid.y_max;
  g["y_step"] = grid.y_step;
  g["mirror"] = grid.mirror;
  if (grid.floor) g["floor"] = *grid.floor;
  j["grid"] = g;
  j["mc"] = {{"count", trajectories}, {"base_seed", base_seed},
             {"level", level},        {"method", method_name(method)},
             {"subtract_bias", subtract_bias}, {"workers", workers}};
  j["out_dir"] = out_dir;
  return j;
}

ScenarioConfig ScenarioConfig::preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.model.type = "stable";
  cfg.grid.x = {0.0, 2.0};
  cfg.grid.y_min = 0.3;
  cfg.grid.y_max = 4.0;
  cfg.grid.y_step = 0.05;
  cfg.grid.mirror = true;
  cfg.grid.floor = 0.3;
  if (name == "d1") {
    cfg.scheme.t_end = 1000.0;
    cfg.scheme.delta = 0.01;
    cfg.bandwidths = {{0.2, 0.2}, {0.4, 0.4}};
  } else if (name == "d2") {
    cfg.scheme.t_end = 1000.0;
    cfg.scheme.delta = 0.0025;
    cfg.bandwidths = {{0.2, 0.2}, {0.4, 0.4}};
  } else if (name == "d3") {
    cfg.scheme.t_end = 2500.0;
    cfg.scheme.delta = 0.0025;
    cfg.bandwidths = {{0.2, 0.4}, {0.4, 0.2}};
  } else if (name == "d1-scaled") {
    // desk-scale replica of d1: same spacing, a fifth of the horizon
    cfg.scheme.t_end = 200.0;
    cfg.scheme.delta = 0.01;
    cfg.bandwidths = {{0.4, 0.4}};
  } else if (name == "d3-scaled") {
    // desk-scale replica of d3: same spacing, a tenth of the horizon
    cfg.scheme.t_end = 250.0;
    cfg.scheme.delta = 0.0025;
    cfg.bandwidths = {{0.2, 0.4}};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

std::string ScenarioConfig::config_hash() const {
  nlohmann::json j = to_json();
  // execution details do not change what is being computed
  j.erase("out_dir");
  j["mc"].erase("workers");
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

std::vector<EstimateRow> estimate_trajectory(const LevyModel& model, const SamplePath& path,
                                             const ScenarioConfig& cfg, const Bandwidth& bw) {
  EstimationRequest req;
  req.observations = &path;
  req.bandwidth = bw;
  req.g1 = KernelSpec::by_name(cfg.kernel1);
  req.g2 = KernelSpec::by_name(cfg.kernel2);
  req.smoothness = cfg.smoothness;
  req.sigma_at = [&model](std::span<const double> x) {
    return std::sqrt(std::max(model.diffusion(x[0]), 0.0));
  };

  const double sigma0 = std::sqrt(std::max(model.diffusion(cfg.x0), 0.0));
  const double default_floor = unreliable_threshold(sigma0, path.delta);
  const std::vector<double> ys = cfg.grid.y_values(default_floor);
  for (double x : cfg.grid.x) {
    for (double y : ys) req.grid.emplace_back(x, y);
  }

  const std::vector<PointEstimate> ests = estimate_grid(req);
  std::vector<EstimateRow> rows(ests.size());
  for (std::size_t i = 0; i < ests.size(); ++i) {
    const PointEstimate& est = ests[i];
    EstimateRow& row = rows[i];
    row.x = req.grid[i].x[0];
    row.y = req.grid[i].y[0];
    row.f_true = levy_density_eval(model, row.x, row.y);
    row.f_hat = est.f_hat;
    row.gamma_hat = est.gamma_hat;
    row.denom = est.denom;
    row.reliable = est.reliable;
    if (est.denom > 0.0) {
      const double c = variance_scale(est, bw, req.g1, req.g2, path.dim);
      const IntervalResult ci = cfg.method == IntervalMethod::wald
                                    ? ci_wald(est, c, cfg.level, cfg.subtract_bias)
                                    : ci_inversion(est, c, cfg.level, cfg.subtract_bias);
      row.ci_lo = ci.lo;
      row.ci_hi = ci.hi;
      row.ci_empty = ci.empty;
    } else {
      // no weight anywhere near x: no interval either
      row.ci_lo = 0.0;
      row.ci_hi = 0.0;
      row.ci_empty = true;
    }
  }
  return rows;
}

namespace {

std::string results_header(const ScenarioConfig& cfg, const Bandwidth& bw,
                           std::uint64_t seed) {
  std::string h = "# levykde estimates v1\n";
  h += "# model=" + cfg.model.type + " eta1=" + format_full(bw.eta1) +
       " eta2=" + format_full(bw.eta2) + " kernel1=" + cfg.kernel1 +
       " kernel2=" + cfg.kernel2 + " level=" + format_full(cfg.level) +
       " method=" + method_name(cfg.method) + " seed=" + std::to_string(seed) +
       " config_hash=" + cfg.config_hash() + " version=" + kVersion + "\n";
  return h;
}

std::string bandwidth_tag(const Bandwidth& bw) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "eta_%g_%g", bw.eta1, bw.eta2);
  std::string s(buf);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const std::vector<EstimateRow>& rows,
                                                  const ScenarioConfig& cfg,
                                                  const Bandwidth& bw,
                                                  const std::filesystem::path& dir,
                                                  const std::string& tag) {
  std::vector<std::filesystem::path> files;
  for (double x : cfg.grid.x) {
    char name[96];
    std::snprintf(name, sizeof(name), "plot_%s_x_%g.csv", tag.c_str(), x);
    std::string s(name);
    for (char& c : s) {
      if (c == '-') c = 'm';
    }
    const std::filesystem::path file = dir / s;
    std::string text = "# levykde plotdata v1\n# x=" + format_full(x) +
                       " eta1=" + format_full(bw.eta1) + " eta2=" + format_full(bw.eta2) +
                       " config_hash=" + cfg.config_hash() + "\n";
    text += "y,f_true,f_hat,f_hat_corrected,ci_lo,ci_hi,reliable\n";
    for (const auto& row : rows) {
      if (row.x != x) continue;
      text += format_full(row.y) + "," + format_full(row.f_true) + "," +
              format_full(row.f_hat) + "," + format_full(row.f_hat - row.gamma_hat) + "," +
              format_full(row.ci_lo) + "," + format_full(row.ci_hi) + "," +
              (row.reliable ? "1" : "0") + "\n";
    }
    write_text(file, text);
    files.push_back(file);
  }
  return files;
}

RunOutputs run_scenario(const ScenarioConfig& cfg) {
  if (!cfg.seed_set) {
    throw std::invalid_argument("run_scenario: an explicit seed is required");
  }
  const LevyModel model = cfg.model.build();
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);

  RunOutputs out;
  auto [path, log] = simulate_path(model, cfg.scheme, cfg.x0, cfg.base_seed);

  PathMeta meta;
  meta.model_id = cfg.model.type;
  meta.extra["config_hash"] = cfg.config_hash();
  const std::filesystem::path path_file = dir / "path.csv";
  write_path(path, meta, path_file);
  out.files.push_back(path_file);
  const std::filesystem::path jumps_file = dir / "jumps.csv";
  write_jump_log(log, meta, jumps_file);
  out.files.push_back(jumps_file);

  nlohmann::json manifest;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = cfg.config_hash();
  manifest["seed"] = cfg.base_seed;
  manifest["version"] = kVersion;
  nlohmann::json outputs = nlohmann::json::array();
  outputs.push_back(path_file.filename().string());
  outputs.push_back(jumps_file.filename().string());

  for (const Bandwidth& bw : cfg.bandwidths) {
    const std::vector<EstimateRow> rows = estimate_trajectory(model, path, cfg, bw);
    const std::string tag = bandwidth_tag(bw);
    const std::filesystem::path results_file = dir / ("results_" + tag + ".csv");
    std::string text = results_header(cfg, bw, cfg.base_seed);
    text += "x,y,f_hat,gamma_hat,denom,reliable,ci_lo,ci_hi,method\n";
    for (const auto& row : rows) {
      text += format_full(row.x) + "," + format_full(row.y) + "," + format_full(row.f_hat) +
              "," + format_full(row.gamma_hat) + "," + format_full(row.denom) + "," +
              (row.reliable ? "1" : "0") + "," + format_full(row.ci_lo) + "," +
              format_full(row.ci_hi) + "," + method_name(cfg.method) + "\n";
    }
    write_text(results_file, text);
    out.files.push_back(results_file);
    outputs.push_back(results_file.filename().string());

    for (const auto& f : emit_plot_data(rows, cfg, bw, dir, tag)) {
      out.files.push_back(f);
      outputs.push_back(f.filename().string());
    }
  }

  manifest["outputs"] = outputs;
  const std::filesystem::path manifest_file = dir / "manifest.json";
  write_text(manifest_file, manifest.dump(2) + "\n");
  out.files.push_back(manifest_file);
  return out;
}

CoverageReport coverage_study(const ScenarioConfig& cfg) {
  if (!cfg.seed_set) {
    throw std::invalid_argument("coverage_study: an explicit seed is required");
  }
  if (cfg.trajectories < 1) {
    throw std::invalid_argument("coverage_study: need at least one trajectory");
  }
  const LevyModel model = cfg.model.build();
  const int n_traj = cfg.trajectories;
  const std::size_t n_bw = cfg.bandwidths.size();

  // per-trajectory result rows, indexed [trajectory][bandwidth-block row]
  std::vector<std::vector<EstimateRow>> all(static_cast<std::size_t>(n_traj));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_text;
  std::mutex error_mutex;

  const int n_workers = std::max(1, cfg.workers);
  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n_traj || failed.load()) break;
      try {
        auto [path, log] =
            simulate_path(model, cfg.scheme, cfg.x0, cfg.base_seed + static_cast<std::uint64_t>(i));
        std::vector<EstimateRow> rows;
        for (const Bandwidth& bw : cfg.bandwidths) {
          auto part = estimate_trajectory(model, path, cfg, bw);
          rows.insert(rows.end(), part.begin(), part.end());
        }
        all[static_cast<std::size_t>(i)] = std::move(rows);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_text = e.what();
        failed.store(true);
      }
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("coverage_study: " + error_text);

  const std::size_t n_rows = all[0].size();
  const std::size_t per_bw = n_rows / n_bw;
  CoverageReport rep;
  rep.bandwidths = cfg.bandwidths;
  rep.per_bandwidth = per_bw;
  rep.rows.resize(n_rows);
  // sequential reduction in trajectory order: byte-identical regardless of
  // worker count
  for (std::size_t r = 0; r < n_rows; ++r) {
    CoverageRow& agg = rep.rows[r];
    agg.x = all[0][r].x;
    agg.y = all[0][r].y;
    agg.f_true = all[0][r].f_true;
    double hits = 0.0, sum_f = 0.0, sum_lo = 0.0, sum_hi = 0.0, sq_err = 0.0;
    for (int i = 0; i < n_traj; ++i) {
      const EstimateRow& row = all[static_cast<std::size_t>(i)][r];
      const bool contains =
          !row.ci_empty && row.ci_lo <= agg.f_true && agg.f_true <= row.ci_hi;
      hits += contains ? 1.0 : 0.0;
      sum_f += row.f_hat;
      sum_lo += row.ci_lo;
      sum_hi += row.ci_hi;
      const double err = row.f_hat - agg.f_true;
      sq_err += err * err;
    }
    const double inv = 1.0 / static_cast<double>(n_traj);
    agg.coverage = hits * inv;
    agg.mean_estimate = sum_f * inv;
    agg.mean_lo = sum_lo * inv;
    agg.mean_hi = sum_hi * inv;
    agg.rmse = std::sqrt(sq_err * inv);
  }
  return rep;
}

RunOutputs write_coverage(const CoverageReport& rep, const ScenarioConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  RunOutputs out;
  nlohmann::json outputs = nlohmann::json::array();
  for (std::size_t b = 0; b < rep.bandwidths.size(); ++b) {
    const std::string tag = bandwidth_tag(rep.bandwidths[b]);
    const std::filesystem::path file = dir / ("coverage_" + tag + ".csv");
    std::string text = "# levykde coverage v1\n# trajectories=" +
                       std::to_string(cfg.trajectories) + " level=" + format_full(cfg.level) +
                       " config_hash=" + cfg.config_hash() + "\n";
    text += "x,y,f_true,coverage,mean_estimate,mean_ci_lo,mean_ci_hi,rmse\n";
    for (std::size_t r = 0; r < rep.per_bandwidth; ++r) {
      const CoverageRow& row = rep.rows[b * rep.per_bandwidth + r];
      text += format_full(row.x) + "," + format_full(row.y) + "," + format_full(row.f_true) +
              "," + format_full(row.coverage) + "," + format_full(row.mean_estimate) + "," +
              format_full(row.mean_lo) + "," + format_full(row.mean_hi) + "," +
              format_full(row.rmse) + "\n";
    }
    write_text(file, text);
    out.files.push_back(file);
    outputs.push_back(file.filename().string());
  }
  nlohmann::json manifest;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = cfg.config_hash();
  manifest["seed"] = cfg.base_seed;
  manifest["version"] = kVersion;
  manifest["outputs"] = outputs;
  const std::filesystem::path manifest_file = dir / "coverage_manifest.json";
  write_text(manifest_file, manifest.dump(2) + "\n");
  out.files.push_back(manifest_file);
  return out;
}

}  // namespace levykde
