#include "varattack/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "varattack/oracle.hpp"

namespace varattack {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

void ensure_writable(const std::filesystem::path& path, bool force) {
  if (std::filesystem::exists(path) && !force)
    throw UsageError("output exists, pass --force to overwrite: " + path.string());
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  if (csv.extension() == ".csv") {
    auto p = csv;
    return p.replace_extension(".json");
  }
  return csv.string() + ".json";
}

std::filesystem::path summary_path(const std::filesystem::path& csv) {
  if (csv.extension() == ".csv") {
    auto p = csv;
    return p.replace_extension(".summary.json");
  }
  return csv.string() + ".summary.json";
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string accessible_string(const std::vector<Index>& accessible, Index d) {
  if (static_cast<Index>(accessible.size()) == d) return "all";
  std::ostringstream out;
  for (std::size_t k = 0; k < accessible.size(); ++k) {
    if (k) out << ';';
    out << accessible[k] + 1;
  }
  return out.str();
}

DagStructure structure_for(const DataSpec& spec) {
  switch (spec.structure) {
    case StructureKind::Chain: return make_chain(spec.d);
    case StructureKind::Fork: return make_fork(spec.d);
    case StructureKind::Collider:
      if (spec.d != 3) throw std::invalid_argument("the collider structure has three nodes");
      return make_collider();
  }
  throw std::logic_error("unreachable");
}

constexpr std::uint64_t kWeightStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

}  // namespace

WeightedScm build_scm(const DataSpec& spec, std::uint64_t seed) {
  DagStructure structure = structure_for(spec);
  if (spec.random_weights) {
    Rng rng(derive_seed(seed, kWeightStream));
    return make_random_weight_scm(std::move(structure), spec.weight_lo, spec.weight_hi,
                                  spec.sigma, rng);
  }
  return make_uniform_scm(std::move(structure), spec.weight, spec.sigma);
}

DataMatrix draw_dataset(const DataSpec& spec, std::uint64_t seed) {
  return sample(build_scm(spec, seed), spec.n, derive_seed(seed, kNoiseStream));
}

int cmd_generate(const GenerateOpts& opts) {
  const std::filesystem::path csv = opts.out;
  const std::filesystem::path meta = sidecar_path(csv);
  ensure_writable(csv, opts.force);
  ensure_writable(meta, opts.force);

  const WeightedScm scm = build_scm(opts.data, opts.seed);
  const std::uint64_t noise_seed = derive_seed(opts.seed, kNoiseStream);
  const DataMatrix data = sample(scm, opts.data.n, noise_seed);

  write_dataset_csv(csv, data);
  write_json_file(meta, provenance_to_json(Provenance{scm, opts.data.n, noise_seed}));
  return kExitOk;
}

int cmd_attack(const AttackOpts& opts) {
  ensure_writable(opts.out, opts.force);
  if (opts.lambdas.empty()) throw UsageError("need at least one lambda");
  if (opts.trials < 1) throw UsageError("trials must be positive");

  const std::string source_name = to_string(opts.data.structure);
  const std::string attack_name = to_string(opts.attack);
  const int n_lambda = static_cast<int>(opts.lambdas.size());

  std::vector<OutcomeRow> rows;
  if (!opts.imperfect) {
    rows.resize(static_cast<std::size_t>(opts.trials * n_lambda));
    parallel_for(opts.trials, opts.threads, [&](int t) {
      const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(t);
      const DataMatrix data = draw_dataset(opts.data, seed);
      const AttackPlan plan =
          plan_recipe_attack(data, opts.data.structure, opts.attack, opts.margin);
      for (int li = 0; li < n_lambda; ++li) {
        NotearsConfig config = opts.solver;
        config.lambda1 = opts.lambdas[static_cast<std::size_t>(li)];
        OutcomeRow row{seed,        source_name,  attack_name,
                       config.lambda1, opts.margin, accessible_string(plan.accessible, 3),
                       run_attack(data, plan, config)};
        rows[static_cast<std::size_t>(t * n_lambda + li)] = std::move(row);
      }
    });
  } else {
    const RecipeSpec spec = recipe(opts.data.structure, opts.attack);
    const DagStructure source = canonical_structure(opts.data.structure);
    std::vector<Index> accessible = opts.accessible.empty()
                                        ? std::vector<Index>{0}
                                        : opts.accessible;
    if (opts.scales.empty()) throw UsageError("need at least one scale");

    if (opts.search) {
      std::vector<std::vector<OutcomeRow>> grouped(
          static_cast<std::size_t>(opts.trials * n_lambda));
      parallel_for(opts.trials * n_lambda, opts.threads, [&](int k) {
        const int t = k / n_lambda;
        const int li = k % n_lambda;
        const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(t);
        const DataMatrix data = draw_dataset(opts.data, seed);
        NotearsConfig config = opts.solver;
        config.lambda1 = opts.lambdas[static_cast<std::size_t>(li)];
        const ScaleSearchResult search =
            scale_search(data, source, spec.target, accessible, opts.scales, config);
        auto& bucket = grouped[static_cast<std::size_t>(k)];
        for (std::size_t f = 0; f < search.failures.size(); ++f)
          bucket.push_back(OutcomeRow{seed, source_name, attack_name, config.lambda1,
                                      opts.scales[f], accessible_string(accessible, data.d()),
                                      search.failures[f]});
        if (search.hit)
          bucket.push_back(OutcomeRow{seed, source_name, attack_name, config.lambda1,
                                      search.hit_scale,
                                      accessible_string(accessible, data.d()), *search.hit});
      });
      for (auto& bucket : grouped)
        for (auto& row : bucket) rows.push_back(std::move(row));
    } else {
      const int n_scale = static_cast<int>(opts.scales.size());
      rows.resize(static_cast<std::size_t>(opts.trials * n_scale * n_lambda));
      parallel_for(opts.trials, opts.threads, [&](int t) {
        const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(t);
        const DataMatrix data = draw_dataset(opts.data, seed);
        for (int si = 0; si < n_scale; ++si) {
          const double scale = opts.scales[static_cast<std::size_t>(si)];
          const AttackPlan plan =
              imperfect_attack(data, source, spec.target, accessible, scale);
          for (int li = 0; li < n_lambda; ++li) {
            NotearsConfig config = opts.solver;
            config.lambda1 = opts.lambdas[static_cast<std::size_t>(li)];
            rows[static_cast<std::size_t>((t * n_scale + si) * n_lambda + li)] =
                OutcomeRow{seed,   source_name,
                           attack_name, config.lambda1,
                           scale,  accessible_string(accessible, data.d()),
                           run_attack(data, plan, config)};
          }
        }
      });
    }
  }

  write_outcome_csv(opts.out, rows);
  return kExitOk;
}

SweepResult run_reversal_sweep(const SweepOpts& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be positive");
  if (opts.scales.empty() || opts.lambdas.empty())
    throw std::invalid_argument("scale and lambda grids must be nonempty");
  if (opts.data.d < 3)
    throw std::invalid_argument("the reversal sweep needs at least three nodes");

  const DagStructure source = make_chain(opts.data.d);
  const DagStructure target = reverse_dag(source);
  const int n_scale = static_cast<int>(opts.scales.size());
  const int n_lambda = static_cast<int>(opts.lambdas.size());
  const int per_trial = n_scale * n_lambda;

  SweepResult result;
  result.raw.resize(static_cast<std::size_t>(opts.trials * per_trial));

  parallel_for(opts.trials, opts.threads, [&](int t) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(t);
    // Fresh edge weights and fresh noise for every trial; the same dataset is
    // reused across the whole (scale, lambda) grid.
    Rng wrng(derive_seed(seed, kWeightStream));
    const WeightedScm scm = make_random_weight_scm(source, opts.data.weight_lo,
                                                   opts.data.weight_hi, opts.data.sigma, wrng);
    const DataMatrix data = sample(scm, opts.data.n, derive_seed(seed, kNoiseStream));

    for (int si = 0; si < n_scale; ++si) {
      const double scale = opts.scales[static_cast<std::size_t>(si)];
      const AttackPlan plan = imperfect_attack(data, source, target, {0}, scale);
      for (int li = 0; li < n_lambda; ++li) {
        NotearsConfig config = opts.solver;
        config.lambda1 = opts.lambdas[static_cast<std::size_t>(li)];
        result.raw[static_cast<std::size_t>(t * per_trial + si * n_lambda + li)] =
            OutcomeRow{seed,  "chain",
                       "reverse", config.lambda1,
                       scale, accessible_string({0}, opts.data.d),
                       run_attack(data, plan, config)};
      }
    }
  });

  for (int si = 0; si < n_scale; ++si)
    for (int li = 0; li < n_lambda; ++li) {
      SweepCell cell;
      cell.scale = opts.scales[static_cast<std::size_t>(si)];
      cell.lambda = opts.lambdas[static_cast<std::size_t>(li)];
      cell.trials = opts.trials;
      double hits = 0.0, shd = 0.0;
      for (int t = 0; t < opts.trials; ++t) {
        const auto& row =
            result.raw[static_cast<std::size_t>(t * per_trial + si * n_lambda + li)];
        hits += row.outcome.success ? 1.0 : 0.0;
        shd += row.outcome.shd_to_expected;
      }
      cell.success_ratio = hits / opts.trials;
      cell.mean_shd = shd / opts.trials;
      result.cells.push_back(cell);
    }
  return result;
}

int cmd_sweep(const SweepOpts& opts) {
  ensure_writable(opts.out, opts.force);
  if (opts.raw_out) ensure_writable(*opts.raw_out, opts.force);
  const SweepResult result = run_reversal_sweep(opts);
  write_sweep_csv(opts.out, result.cells);
  if (opts.raw_out) write_outcome_csv(*opts.raw_out, result.raw);
  return kExitOk;
}

int cmd_oracle(const OracleOpts& opts) {
  ensure_writable(opts.out, opts.force);

  if (opts.conjecture1) {
    if (opts.trials < 1) throw UsageError("trials must be positive");
    const Index d = opts.data.d;
    std::ofstream out(opts.out);
    if (!out) throw std::runtime_error("cannot open for writing: " + opts.out);
    out << "seed,forward_mmse,reverse_mmse,holds\n";
    for (int t = 0; t < opts.trials; ++t) {
      const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(t);
      const auto check = conjecture1_check(d, VectorXd::Constant(d - 1, opts.data.weight),
                                           VectorXd::Constant(d, opts.data.sigma),
                                           opts.data.n, seed, opts.margin);
      out << seed << ',' << format_double(check.forward_mmse) << ','
          << format_double(check.reverse_mmse) << ',' << (check.holds ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + opts.out);
    return kExitOk;
  }

  OracleReport report;
  if (opts.data_csv) {
    if (!std::filesystem::exists(*opts.data_csv))
      throw UsageError("no such dataset: " + *opts.data_csv);
    report = score_all_dags(read_dataset_csv(*opts.data_csv));
  } else {
    const WeightedScm scm = build_scm(opts.data, opts.seed);
    const std::uint64_t noise_seed = derive_seed(opts.seed, kNoiseStream);
    report = score_all_dags(sample(scm, opts.data.n, noise_seed));
    report.dataset_provenance = Provenance{scm, opts.data.n, noise_seed};
  }

  write_oracle_csv(opts.out, report);
  const CorrelationSummary corr = varsort_mmse_correlation(report);
  write_json_file(summary_path(opts.out), oracle_summary_to_json(report, corr));

  if (opts.graphs_out) {
    ensure_writable(*opts.graphs_out, opts.force);
    Json graphs = Json::array();
    for (const auto& entry : report.entries) {
      Json g = graph_to_json(entry.dag);
      g["graph_id"] = entry.graph_id;
      graphs.push_back(std::move(g));
    }
    write_json_file(*opts.graphs_out, graphs);
  }
  if (opts.best_dag_out) {
    ensure_writable(*opts.best_dag_out, opts.force);
    write_json_file(*opts.best_dag_out, graph_to_json(best_dag(report, opts.penalty)));
  }
  return kExitOk;
}

int cmd_solve(const SolveOpts& opts) {
  if (!std::filesystem::exists(opts.data_csv))
    throw UsageError("no such dataset: " + opts.data_csv);
  ensure_writable(opts.out, opts.force);

  const DataMatrix data = read_dataset_csv(opts.data_csv);
  if (!data.values.allFinite())
    throw std::runtime_error("dataset contains non-finite values");

  const SolveResult result = solve(data, opts.solver);
  write_json_file(opts.out, solve_result_to_json(result));
  return result.converged ? kExitOk : kExitRuntime;
}

}  // namespace varattack
