#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varattack/runner.hpp"

namespace {

using varattack::Json;

// Per-subcommand option layering: an explicitly set flag wins, then a value
// from the --config JSON object, then the compiled-in default (already held
// by the bound variable).
Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw varattack::UsageError("cannot read config: " + path);
  Json cfg;
  try {
    in >> cfg;
  } catch (const Json::parse_error& e) {
    throw varattack::UsageError("bad config JSON in " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw varattack::UsageError("config must be a JSON object: " + path);
  return cfg;
}

template <typename T>
T pick(const CLI::App* cmd, const std::string& flag, const Json& cfg,
       const std::string& key, const T& bound) {
  if (cmd->count(flag) > 0) return bound;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw varattack::UsageError("bad config value for \"" + key + "\": " + e.what());
    }
  }
  return bound;
}

struct DataFlags {
  std::string structure = "chain";
  varattack::Index d = 3;
  varattack::Index n = 10000;
  double weight = 1.0;
  bool random_weights = false;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
  double sigma = 1.0;
  bool has_structure = true;

  void add(CLI::App* cmd, bool with_structure = true) {
    has_structure = with_structure;
    if (with_structure)
      cmd->add_option("--structure", structure, "Source structure: chain|fork|collider")
          ->capture_default_str();
    cmd->add_option("-d,--nodes", d, "Node count")->capture_default_str();
    cmd->add_option("-n,--samples", n, "Sample count")->capture_default_str();
    cmd->add_option("--weight", weight, "Fixed edge weight")->capture_default_str();
    cmd->add_flag("--random-weights", random_weights,
                  "Draw each |weight| uniformly from [weight-lo, weight-hi] with random sign");
    cmd->add_option("--weight-lo", weight_lo, "Lower |weight| bound")->capture_default_str();
    cmd->add_option("--weight-hi", weight_hi, "Upper |weight| bound")->capture_default_str();
    cmd->add_option("--sigma", sigma, "Noise standard deviation")->capture_default_str();
  }

  varattack::DataSpec resolve(const CLI::App* cmd, const Json& cfg) const {
    varattack::DataSpec spec;
    if (has_structure)
      spec.structure = varattack::structure_kind_from_string(
          pick(cmd, "--structure", cfg, "structure", structure));
    spec.d = pick(cmd, "--nodes", cfg, "d", d);
    spec.n = pick(cmd, "--samples", cfg, "n", n);
    spec.weight = pick(cmd, "--weight", cfg, "weight", weight);
    spec.random_weights = pick(cmd, "--random-weights", cfg, "random_weights", random_weights);
    spec.weight_lo = pick(cmd, "--weight-lo", cfg, "weight_lo", weight_lo);
    spec.weight_hi = pick(cmd, "--weight-hi", cfg, "weight_hi", weight_hi);
    spec.sigma = pick(cmd, "--sigma", cfg, "sigma", sigma);
    return spec;
  }
};

struct SolverFlags {
  double lambda1 = 0.1;
  double rho_init = 1.0;
  double rho_mult = 10.0;
  double h_tol = 1e-8;
  double inner_tol = 1e-6;
  double omega = 0.3;
  int max_outer = 100;
  int max_inner = 1000;

  void add(CLI::App* cmd, bool with_lambda) {
    if (with_lambda)
      cmd->add_option("--lambda", lambda1, "L1 penalty weight")->capture_default_str();
    cmd->add_option("--rho-init", rho_init, "Initial penalty coefficient")->capture_default_str();
    cmd->add_option("--rho-mult", rho_mult, "Penalty growth factor")->capture_default_str();
    cmd->add_option("--h-tol", h_tol, "Acyclicity tolerance")->capture_default_str();
    cmd->add_option("--inner-tol", inner_tol, "Inner projected-gradient tolerance")
        ->capture_default_str();
    cmd->add_option("--omega", omega, "Edge threshold")->capture_default_str();
    cmd->add_option("--max-outer", max_outer, "Outer iteration cap")->capture_default_str();
    cmd->add_option("--max-inner", max_inner, "Inner iteration cap")->capture_default_str();
  }

  varattack::NotearsConfig resolve(const CLI::App* cmd, const Json& cfg,
                                   bool with_lambda) const {
    varattack::NotearsConfig config;
    if (with_lambda) config.lambda1 = pick(cmd, "--lambda", cfg, "lambda", lambda1);
    config.rho_init = pick(cmd, "--rho-init", cfg, "rho_init", rho_init);
    config.rho_mult = pick(cmd, "--rho-mult", cfg, "rho_mult", rho_mult);
    config.h_tol = pick(cmd, "--h-tol", cfg, "h_tol", h_tol);
    config.inner_tol = pick(cmd, "--inner-tol", cfg, "inner_tol", inner_tol);
    config.omega = pick(cmd, "--omega", cfg, "omega", omega);
    config.max_outer = pick(cmd, "--max-outer", cfg, "max_outer", max_outer);
    config.max_inner = pick(cmd, "--max-inner", cfg, "max_inner", max_inner);
    return config;
  }
};

std::vector<varattack::Index> to_zero_based(const std::vector<int>& one_based) {
  std::vector<varattack::Index> out;
  out.reserve(one_based.size());
  for (int c : one_based) {
    if (c < 1) throw varattack::UsageError("column indices are 1-based");
    out.push_back(static_cast<varattack::Index>(c - 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-rescaling attacks against least-squares NOTEARS"};
  app.require_subcommand(1);
  int rc = varattack::kExitOk;

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a dataset CSV plus a JSON sidecar");
  DataFlags gen_data;
  gen_data.add(gen);
  std::string gen_out, gen_config;
  std::uint64_t gen_seed = 0;
  bool gen_force = false;
  gen->add_option("--out", gen_out, "Dataset CSV path")->required();
  gen->add_option("--seed", gen_seed, "Base RNG seed")->capture_default_str();
  gen->add_flag("--force", gen_force, "Overwrite existing outputs");
  gen->add_option("--config", gen_config, "JSON config file (flags win)");
  gen->callback([&] {
    const Json cfg = load_config(gen_config);
    varattack::GenerateOpts opts;
    opts.data = gen_data.resolve(gen, cfg);
    opts.seed = pick(gen, "--seed", cfg, "seed", gen_seed);
    opts.out = pick(gen, "--out", cfg, "out", gen_out);
    opts.force = pick(gen, "--force", cfg, "force", gen_force);
    rc = varattack::cmd_generate(opts);
  });

  // attack
  auto* atk = app.add_subcommand("attack", "Run rescaling attacks and record outcome rows");
  DataFlags atk_data;
  atk_data.add(atk);
  SolverFlags atk_solver;
  atk_solver.add(atk, false);
  std::string atk_kind = "reverse", atk_out, atk_config;
  double atk_margin = 2.0;
  std::vector<double> atk_lambdas{0.1};
  std::vector<double> atk_scales{2.0};
  std::vector<int> atk_accessible;
  int atk_trials = 20, atk_threads = 1;
  std::uint64_t atk_seed = 0;
  bool atk_imperfect = false, atk_search = false, atk_force = false;
  atk->add_option("--attack", atk_kind, "reverse|to_fork|to_collider|to_chain")
      ->capture_default_str();
  atk->add_option("--margin", atk_margin, "Variance margin for perfect plans")
      ->capture_default_str();
  atk->add_option("--lambda", atk_lambdas, "L1 grid (repeatable)")->capture_default_str();
  atk->add_option("--scale", atk_scales, "Scale grid for imperfect attacks (repeatable)")
      ->capture_default_str();
  atk->add_option("--accessible", atk_accessible,
                  "1-based columns an imperfect attack may rescale (default: 1)");
  atk->add_option("--trials", atk_trials, "Seeds per configuration")->capture_default_str();
  atk->add_option("--seed", atk_seed, "Base RNG seed")->capture_default_str();
  atk->add_flag("--imperfect", atk_imperfect, "Rescale only the accessible columns");
  atk->add_flag("--search", atk_search, "Walk the scale grid until the attack lands");
  atk->add_option("--threads", atk_threads, "Worker threads (0 = one per core)")
      ->capture_default_str();
  atk->add_option("--out", atk_out, "Outcome CSV path")->required();
  atk->add_flag("--force", atk_force, "Overwrite existing outputs");
  atk->add_option("--config", atk_config, "JSON config file (flags win)");
  atk->callback([&] {
    const Json cfg = load_config(atk_config);
    varattack::AttackOpts opts;
    opts.data = atk_data.resolve(atk, cfg);
    opts.solver = atk_solver.resolve(atk, cfg, false);
    opts.attack = varattack::attack_kind_from_string(
        pick(atk, "--attack", cfg, "attack", atk_kind));
    opts.margin = pick(atk, "--margin", cfg, "margin", atk_margin);
    opts.lambdas = pick(atk, "--lambda", cfg, "lambda", atk_lambdas);
    opts.scales = pick(atk, "--scale", cfg, "scale", atk_scales);
    opts.accessible =
        to_zero_based(pick(atk, "--accessible", cfg, "accessible", atk_accessible));
    opts.trials = pick(atk, "--trials", cfg, "trials", atk_trials);
    opts.seed = pick(atk, "--seed", cfg, "seed", atk_seed);
    opts.imperfect = pick(atk, "--imperfect", cfg, "imperfect", atk_imperfect);
    opts.search = pick(atk, "--search", cfg, "search", atk_search);
    opts.threads = pick(atk, "--threads", cfg, "threads", atk_threads);
    opts.out = pick(atk, "--out", cfg, "out", atk_out);
    opts.force = pick(atk, "--force", cfg, "force", atk_force);
    rc = varattack::cmd_attack(opts);
  });

  // sweep
  auto* swp = app.add_subcommand("sweep",
                                 "Chain-reversal grid over (scale, lambda), one root column "
                                 "rescaled per trial");
  DataFlags swp_data;
  swp_data.add(swp, false);
  SolverFlags swp_solver;
  swp_solver.add(swp, false);
  std::string swp_out, swp_raw, swp_config;
  std::vector<double> swp_scales{2, 4, 8, 10};
  std::vector<double> swp_lambdas{0.0, 0.01, 0.1, 1.0};
  int swp_trials = 100, swp_threads = 1;
  std::uint64_t swp_seed = 0;
  bool swp_force = false;
  swp->add_option("--scale", swp_scales, "Scale grid (repeatable)")->capture_default_str();
  swp->add_option("--lambda", swp_lambdas, "L1 grid (repeatable)")->capture_default_str();
  swp->add_option("--trials", swp_trials, "Datasets per cell")->capture_default_str();
  swp->add_option("--seed", swp_seed, "Base RNG seed")->capture_default_str();
  swp->add_option("--threads", swp_threads, "Worker threads (0 = one per core)")
      ->capture_default_str();
  swp->add_option("--out", swp_out, "Aggregate CSV path")->required();
  swp->add_option("--raw-out", swp_raw, "Optional per-trial outcome CSV");
  swp->add_flag("--force", swp_force, "Overwrite existing outputs");
  swp->add_option("--config", swp_config, "JSON config file (flags win)");
  swp->callback([&] {
    const Json cfg = load_config(swp_config);
    varattack::SweepOpts opts;
    opts.data = swp_data.resolve(swp, cfg);
    opts.solver = swp_solver.resolve(swp, cfg, false);
    opts.scales = pick(swp, "--scale", cfg, "scale", swp_scales);
    opts.lambdas = pick(swp, "--lambda", cfg, "lambda", swp_lambdas);
    opts.trials = pick(swp, "--trials", cfg, "trials", swp_trials);
    opts.seed = pick(swp, "--seed", cfg, "seed", swp_seed);
    opts.threads = pick(swp, "--threads", cfg, "threads", swp_threads);
    opts.out = pick(swp, "--out", cfg, "out", swp_out);
    const std::string raw = pick(swp, "--raw-out", cfg, "raw_out", swp_raw);
    if (!raw.empty()) opts.raw_out = raw;
    opts.force = pick(swp, "--force", cfg, "force", swp_force);
    rc = varattack::cmd_sweep(opts);
  });

  // oracle
  auto* orc = app.add_subcommand("oracle",
                                 "Score every DAG on d <= 5 nodes, or check the chain "
                                 "reversal conjecture");
  DataFlags orc_data;
  orc_data.add(orc);
  std::string orc_csv, orc_out, orc_graphs, orc_best, orc_config;
  std::uint64_t orc_seed = 0;
  double orc_penalty = 0.0, orc_margin = 2.0;
  int orc_trials = 20;
  bool orc_conj = false, orc_force = false;
  orc->add_option("--data", orc_csv, "Score this dataset CSV instead of sampling one");
  orc->add_option("--seed", orc_seed, "Base RNG seed")->capture_default_str();
  orc->add_option("--penalty", orc_penalty, "Per-edge penalty for best-DAG selection")
      ->capture_default_str();
  orc->add_option("--graphs-out", orc_graphs, "Write every enumerated DAG as JSON");
  orc->add_option("--best-dag-out", orc_best, "Write the best-scoring DAG as JSON");
  orc->add_flag("--conjecture1", orc_conj,
                "Compare forward vs reversed chain fit after rescaling the root");
  orc->add_option("--trials", orc_trials, "Seeds for --conjecture1")->capture_default_str();
  orc->add_option("--margin", orc_margin, "Variance margin for --conjecture1")
      ->capture_default_str();
  orc->add_option("--out", orc_out, "Report CSV path")->required();
  orc->add_flag("--force", orc_force, "Overwrite existing outputs");
  orc->add_option("--config", orc_config, "JSON config file (flags win)");
  orc->callback([&] {
    const Json cfg = load_config(orc_config);
    varattack::OracleOpts opts;
    opts.data = orc_data.resolve(orc, cfg);
    const std::string csv = pick(orc, "--data", cfg, "data", orc_csv);
    if (!csv.empty()) opts.data_csv = csv;
    opts.seed = pick(orc, "--seed", cfg, "seed", orc_seed);
    opts.penalty = pick(orc, "--penalty", cfg, "penalty", orc_penalty);
    const std::string graphs = pick(orc, "--graphs-out", cfg, "graphs_out", orc_graphs);
    if (!graphs.empty()) opts.graphs_out = graphs;
    const std::string best = pick(orc, "--best-dag-out", cfg, "best_dag_out", orc_best);
    if (!best.empty()) opts.best_dag_out = best;
    opts.conjecture1 = pick(orc, "--conjecture1", cfg, "conjecture1", orc_conj);
    opts.trials = pick(orc, "--trials", cfg, "trials", orc_trials);
    opts.margin = pick(orc, "--margin", cfg, "margin", orc_margin);
    opts.out = pick(orc, "--out", cfg, "out", orc_out);
    opts.force = pick(orc, "--force", cfg, "force", orc_force);
    rc = varattack::cmd_oracle(opts);
  });

  // solve
  auto* slv = app.add_subcommand("solve", "Run the solver on a dataset CSV, write result JSON");
  SolverFlags slv_solver;
  slv_solver.add(slv, true);
  std::string slv_csv, slv_out, slv_config;
  bool slv_force = false, slv_record = false;
  slv->add_option("--data", slv_csv, "Dataset CSV path")->required();
  slv->add_option("--out", slv_out, "Result JSON path")->required();
  slv->add_flag("--record-inner", slv_record, "Record per-inner-iteration objectives");
  slv->add_flag("--force", slv_force, "Overwrite existing outputs");
  slv->add_option("--config", slv_config, "JSON config file (flags win)");
  slv->callback([&] {
    const Json cfg = load_config(slv_config);
    varattack::SolveOpts opts;
    opts.solver = slv_solver.resolve(slv, cfg, true);
    opts.solver.record_inner = pick(slv, "--record-inner", cfg, "record_inner", slv_record);
    opts.data_csv = pick(slv, "--data", cfg, "data", slv_csv);
    opts.out = pick(slv, "--out", cfg, "out", slv_out);
    opts.force = pick(slv, "--force", cfg, "force", slv_force);
    rc = varattack::cmd_solve(opts);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? varattack::kExitOk : varattack::kExitUsage;
  } catch (const varattack::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return varattack::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return varattack::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return varattack::kExitRuntime;
  }
  return rc;
}
