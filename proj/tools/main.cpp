// Command-line front end: simulate paths, estimate jump kernels from saved
// paths, run scenario experiments and coverage studies, and check bandwidth
// conditions. Exit codes: 0 success, 2 configuration error, 3 numeric or
// simulation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levykde/bandwidth.hpp"
#include "levykde/estimate.hpp"
#include "levykde/harness.hpp"
#include "levykde/inference.hpp"
#include "levykde/io.hpp"
#include "levykde/levy_model.hpp"
#include "levykde/simulate.hpp"
#include "levykde/version.hpp"

namespace {

using namespace levykde;

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: cannot parse " + what + " '" + s + "'");
  }
}

// Grid strings look like "x=0,2;y=0.3:0.05:4;mirror" with optional
// "floor=0.3" and "nomirror" parts. y ranges are lo:step:hi.
GridSpec parse_grid_spec(const std::string& text) {
  GridSpec g;
  g.x.clear();
  for (const std::string& part : split_on(text, ';')) {
    if (part.empty()) continue;
    if (part == "mirror") {
      g.mirror = true;
    } else if (part == "nomirror") {
      g.mirror = false;
    } else if (part.rfind("x=", 0) == 0) {
      for (const std::string& v : split_on(part.substr(2), ',')) {
        g.x.push_back(parse_num(v, "x value"));
      }
    } else if (part.rfind("y=", 0) == 0) {
      const auto range = split_on(part.substr(2), ':');
      if (range.size() != 3) {
        throw std::invalid_argument("grid: y range must be lo:step:hi, got '" + part + "'");
      }
      g.y_min = parse_num(range[0], "y lo");
      g.y_step = parse_num(range[1], "y step");
      g.y_max = parse_num(range[2], "y hi");
    } else if (part.rfind("floor=", 0) == 0) {
      g.floor = parse_num(part.substr(6), "floor");
    } else {
      throw std::invalid_argument("grid: unknown part '" + part + "'");
    }
  }
  if (g.x.empty()) throw std::invalid_argument("grid: needs at least one x value");
  return g;
}

struct ModelOptions {
  std::string type = "stable";
  StableExampleParams stable;
  CompoundPoissonParams cpoisson;
  double b = 1.0;
  double c = 1.0;
  CLI::Option* b_opt = nullptr;
  CLI::Option* c_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", type, "model: stable or cpoisson")
        ->check(CLI::IsMember({"stable", "cpoisson"}));
    b_opt = cmd->add_option("--b", b, "drift coefficient of -b*x");
    c_opt = cmd->add_option("--c", c, "diffusion coefficient");
    cmd->add_option("--xi", stable.xi, "ramp half-width of the stable model");
    cmd->add_option("--alpha", stable.alpha, "stability index of the stable model");
    cmd->add_option("--lambda", cpoisson.lambda, "jump intensity of the cpoisson model");
    cmd->add_option("--jump-mean", cpoisson.jump_mean, "cpoisson jump mean at x=0");
    cmd->add_option("--jump-spread", cpoisson.jump_spread, "cpoisson state dependence");
  }

  ModelConfig to_config() const {
    ModelConfig m;
    m.type = type;
    m.stable = stable;
    m.cpoisson = cpoisson;
    // shared flags override either model's own default only when given
    if (b_opt && b_opt->count() > 0) {
      m.stable.b = b;
      m.cpoisson.b = b;
    }
    if (c_opt && c_opt->count() > 0) {
      m.stable.c = c;
      m.cpoisson.c = c;
    }
    return m;
  }
};

SmallJumpMode parse_mode(const std::string& s) {
  if (s == "stable_exact") return SmallJumpMode::stable_exact;
  if (s == "neglect") return SmallJumpMode::neglect;
  throw std::invalid_argument("unknown small-jump mode: " + s);
}

ScenarioConfig load_scenario(const std::string& preset, const std::string& config_file) {
  if (!preset.empty() && !config_file.empty()) {
    throw std::invalid_argument("give either --preset or --config, not both");
  }
  if (!preset.empty()) return ScenarioConfig::preset(preset);
  if (!config_file.empty()) {
    std::ifstream is(config_file);
    if (!is) throw std::invalid_argument("cannot open config file " + config_file);
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config file " + config_file + ": " + e.what());
    }
    return ScenarioConfig::from_json(j);
  }
  throw std::invalid_argument("need --preset or --config");
}

int cmd_simulate(const ModelOptions& model_opts, const SimulationScheme& scheme, double x0,
                 std::uint64_t seed, const std::string& out_file,
                 const std::string& jumps_file) {
  const ModelConfig mc = model_opts.to_config();
  const LevyModel model = mc.build();
  auto [path, log] = simulate_path(model, scheme, x0, seed);
  PathMeta meta;
  meta.model_id = model.id;
  write_path(path, meta, out_file);
  std::cout << "wrote " << out_file << " (" << path.size() << " observations, "
            << log.events.size() << " logged jumps)\n";
  if (!jumps_file.empty()) {
    write_jump_log(log, meta, jumps_file);
    std::cout << "wrote " << jumps_file << "\n";
  }
  return 0;
}

int cmd_estimate(const std::string& path_file, const Bandwidth& bw, const std::string& k1,
                 const std::string& k2, const GridSpec& grid, const Smoothness& sm,
                 double level, const std::string& method_name, bool no_correction,
                 const std::string& out_file) {
  auto [path, meta] = read_path(path_file);
  EstimationRequest req;
  req.observations = &path;
  req.bandwidth = bw;
  req.g1 = KernelSpec::by_name(k1);
  req.g2 = KernelSpec::by_name(k2);
  req.smoothness = sm;

  const double sigma0 = diffusion_scale_proxy(path);
  const std::vector<double> ys = grid.y_values(unreliable_threshold(sigma0, path.delta));
  for (double x : grid.x) {
    for (double y : ys) req.grid.emplace_back(x, y);
  }
  const std::vector<PointEstimate> ests = estimate_grid(req);

  const IntervalMethod method =
      method_name == "wald" ? IntervalMethod::wald : IntervalMethod::inversion;
  std::string text = "# levykde estimates v1\n";
  text += "# source=" + path_file + " eta1=" + format_full(bw.eta1) +
          " eta2=" + format_full(bw.eta2) + " kernel1=" + k1 + " kernel2=" + k2 +
          " level=" + format_full(level) + " method=" + method_name +
          " version=" + kVersion + "\n";
  text += "x,y,f_hat,gamma_hat,denom,reliable,ci_lo,ci_hi,method\n";
  for (std::size_t i = 0; i < ests.size(); ++i) {
    const PointEstimate& est = ests[i];
    double lo = 0.0, hi = 0.0;
    if (est.denom > 0.0) {
      const double c = variance_scale(est, bw, req.g1, req.g2, path.dim);
      const IntervalResult ci = method == IntervalMethod::wald
                                    ? ci_wald(est, c, level, !no_correction)
                                    : ci_inversion(est, c, level, !no_correction);
      lo = ci.lo;
      hi = ci.hi;
    }
    text += format_full(req.grid[i].x[0]) + "," + format_full(req.grid[i].y[0]) + "," +
            format_full(est.f_hat) + "," + format_full(est.gamma_hat) + "," +
            format_full(est.denom) + "," + (est.reliable ? "1" : "0") + "," +
            format_full(lo) + "," + format_full(hi) + "," + method_name + "\n";
  }
  if (out_file.empty() || out_file == "-") {
    std::cout << text;
  } else {
    std::ofstream os(out_file);
    if (!os) throw std::runtime_error("cannot write " + out_file);
    os << text;
    std::cout << "wrote " << out_file << " (" << ests.size() << " grid points)\n";
  }
  return 0;
}

int cmd_check_bandwidth(const AsymptoticRegime& regime, const DiscretisationFamily& family,
                        PowerLawBandwidth eta1, PowerLawBandwidth eta2, bool use_optimal,
                        bool continuous) {
  if (use_optimal) {
    const OptimalExponents opt = optimal_exponents(regime);
    eta1.exponent = opt.xi1;
    eta2.exponent = opt.xi2;
  }
  const ConditionReport report = continuous
                                     ? check_conditions_continuous(eta1, eta2, regime)
                                     : check_conditions(family, eta1, eta2, regime);
  std::cout << report.table();
  const OptimalExponents opt = optimal_exponents(regime);
  std::cout << "optimal exponents: xi1=" << format_full(opt.xi1)
            << " xi2=" << format_full(opt.xi2)
            << " rate=" << format_full(opt.rate_exponent) << "\n";
  if (!continuous) {
    std::cout << "critical sampling exponent q*=" <<
        format_full(delta_speed_critical_exponent(regime)) << "\n";
  }
  std::cout << "satisfied: " << (report.satisfied() ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump kernel density estimation for discretely observed Markov models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "simulate one trajectory and save it");
  ModelOptions sim_model;
  sim_model.attach(sim);
  SimulationScheme scheme;
  double sim_x0 = 0.0;
  std::uint64_t sim_seed = 0;
  std::string sim_mode = "stable_exact";
  std::string sim_out = "path.csv";
  std::string sim_jumps;
  sim->add_option("--t", scheme.t_end, "time horizon");
  sim->add_option("--delta", scheme.delta, "observation spacing");
  sim->add_option("--substeps", scheme.substeps, "internal steps per observation");
  sim->add_option("--eps", scheme.eps_jump, "large-jump threshold");
  sim->add_option("--small-jumps", sim_mode, "stable_exact or neglect")
      ->check(CLI::IsMember({"stable_exact", "neglect"}));
  sim->add_flag("--fine", scheme.record_fine_grid, "record the substep-resolution grid");
  sim->add_option("--x0", sim_x0, "initial state");
  sim->add_option("--seed", sim_seed, "rng seed")->required();
  sim->add_option("--out", sim_out, "output path file");
  sim->add_option("--jumps-out", sim_jumps, "also save the logged jumps");

  // estimate ---------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "estimate the jump kernel from a saved path");
  std::string est_path;
  Bandwidth est_bw{0.4, 0.4};
  std::string est_k1 = "biweight", est_k2 = "biweight";
  std::string est_grid = "x=0;y=0.3:0.05:4;mirror";
  Smoothness est_sm;
  double est_level = 0.95;
  std::string est_method = "inversion";
  bool est_nocorr = false;
  std::string est_out;
  est->add_option("--path", est_path, "input path file")->required();
  est->add_option("--eta1", est_bw.eta1, "state bandwidth");
  est->add_option("--eta2", est_bw.eta2, "jump bandwidth");
  est->add_option("--kernel1", est_k1, "state kernel name");
  est->add_option("--kernel2", est_k2, "jump kernel name");
  est->add_option("--grid", est_grid, "grid spec, e.g. x=0,2;y=0.3:0.05:4;mirror");
  est->add_option("--alpha1", est_sm.alpha1, "bias order in x");
  est->add_option("--alpha2", est_sm.alpha2, "bias order in y");
  est->add_option("--level", est_level, "confidence level");
  est->add_option("--method", est_method, "interval method: wald or inversion")
      ->check(CLI::IsMember({"wald", "inversion"}));
  est->add_flag("--no-correction", est_nocorr, "center intervals on the raw estimate");
  est->add_option("--out", est_out, "output file ('-' or empty prints to stdout)");

  // experiment -------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "run a scenario: simulate, estimate, save");
  std::string exp_preset, exp_config, exp_outdir;
  std::uint64_t exp_seed = 0;
  exp->add_option("--preset", exp_preset, "built-in scenario: d1 d2 d3 d1-scaled d3-scaled");
  exp->add_option("--config", exp_config, "scenario config json");
  exp->add_option("--seed", exp_seed, "rng seed")->required();
  exp->add_option("--out-dir", exp_outdir, "output directory override");

  // coverage ---------------------------------------------------------------
  auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the intervals");
  std::string cov_preset, cov_config, cov_outdir;
  std::uint64_t cov_seed = 0;
  bool cov_seed_given = false;
  int cov_traj = 0, cov_workers = 0;
  cov->add_option("--preset", cov_preset, "built-in scenario name");
  cov->add_option("--config", cov_config, "scenario config json");
  cov->add_option("--seed", cov_seed, "base seed (falls back to the config's)")
      ->each([&cov_seed_given](const std::string&) { cov_seed_given = true; });
  cov->add_option("--trajectories", cov_traj, "number of Monte Carlo trajectories");
  cov->add_option("--workers", cov_workers, "worker threads");
  cov->add_option("--out-dir", cov_outdir, "output directory override");

  // check-bandwidth ----------------------------------------------------------
  auto* chk = app.add_subcommand("check-bandwidth", "verify bandwidth rate conditions");
  AsymptoticRegime regime;
  DiscretisationFamily family;
  PowerLawBandwidth chk_eta1, chk_eta2;
  bool chk_opt = false, chk_cont = false;
  chk->add_option("--alpha1", regime.alpha1, "smoothness order in x");
  chk->add_option("--alpha2", regime.alpha2, "smoothness order in y");
  chk->add_option("--dim", regime.d, "state dimension");
  chk->add_option("--beta", regime.beta, "small-jump activity index");
  chk->add_option("--ergodic-delta", regime.delta, "ergodic rate exponent in (0, 1]");
  chk->add_option("--delta-coeff", family.delta_coeff, "sampling family coefficient");
  chk->add_option("--q", family.delta_exponent, "sampling family exponent");
  chk->add_option("--eta1-coeff", chk_eta1.coeff, "eta1 coefficient");
  chk->add_option("--xi1", chk_eta1.exponent, "eta1 span exponent");
  chk->add_option("--eta2-coeff", chk_eta2.coeff, "eta2 coefficient");
  chk->add_option("--xi2", chk_eta2.exponent, "eta2 span exponent");
  chk->add_flag("--optimal", chk_opt, "use the rate-optimal bandwidth exponents");
  chk->add_flag("--continuous", chk_cont, "check the continuous-record conditions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sim)) {
      scheme.small_jump_mode = parse_mode(sim_mode);
      return cmd_simulate(sim_model, scheme, sim_x0, sim_seed, sim_out, sim_jumps);
    }
    if (app.got_subcommand(est)) {
      return cmd_estimate(est_path, est_bw, est_k1, est_k2, parse_grid_spec(est_grid),
                          est_sm, est_level, est_method, est_nocorr, est_out);
    }
    if (app.got_subcommand(exp)) {
      ScenarioConfig cfg = load_scenario(exp_preset, exp_config);
      cfg.base_seed = exp_seed;
      cfg.seed_set = true;
      if (!exp_outdir.empty()) cfg.out_dir = exp_outdir;
      const RunOutputs out = run_scenario(cfg);
      for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
      return 0;
    }
    if (app.got_subcommand(cov)) {
      ScenarioConfig cfg = load_scenario(cov_preset, cov_config);
      if (cov_seed_given) {
        cfg.base_seed = cov_seed;
        cfg.seed_set = true;
      }
      if (!cfg.seed_set) {
        throw std::invalid_argument("coverage: no --seed given and the config has none");
      }
      if (cov_traj > 0) cfg.trajectories = cov_traj;
      if (cov_workers > 0) cfg.workers = cov_workers;
      if (!cov_outdir.empty()) cfg.out_dir = cov_outdir;
      const CoverageReport rep = coverage_study(cfg);
      const RunOutputs out = write_coverage(rep, cfg);
      for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
      return 0;
    }
    if (app.got_subcommand(chk)) {
      return cmd_check_bandwidth(regime, family, chk_eta1, chk_eta2, chk_opt, chk_cont);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
