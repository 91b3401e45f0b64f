#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varattack/attack.hpp"
#include "varattack/io.hpp"
#include "varattack/notears.hpp"
#include "varattack/scm.hpp"

namespace varattack {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Bad invocation (unknown kind, missing input, output exists without force).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs fn(0..count-1) on a small work pool; threads <= 0 means one per core.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// Refuses to overwrite an existing path unless force is set.
void ensure_writable(const std::filesystem::path& path, bool force);

// How datasets for attack/sweep/oracle runs are drawn.
struct DataSpec {
  StructureKind structure = StructureKind::Chain;
  Index d = 3;
  Index n = 10000;
  double weight = 1.0;        // used when random_weights is false
  bool random_weights = false;
  double weight_lo = 0.5;     // |w| range for random weights
  double weight_hi = 2.0;
  double sigma = 1.0;
};

WeightedScm build_scm(const DataSpec& spec, std::uint64_t seed);
DataMatrix draw_dataset(const DataSpec& spec, std::uint64_t seed);

struct GenerateOpts {
  DataSpec data;
  std::uint64_t seed = 0;
  std::string out;
  bool force = false;
};

// Writes the dataset CSV and a JSON sidecar with {scm, n, seed}.
int cmd_generate(const GenerateOpts& opts);

struct AttackOpts {
  DataSpec data;
  AttackKind attack = AttackKind::Reverse;
  double margin = 2.0;
  std::vector<double> lambdas{0.1};
  int trials = 20;
  std::uint64_t seed = 0;
  bool imperfect = false;
  std::vector<Index> accessible;   // 0-based; imperfect mode only
  std::vector<double> scales{2.0}; // imperfect mode; >1 entries become a search grid
  bool search = false;
  NotearsConfig solver;
  std::string out;
  bool force = false;
  int threads = 1;
};

int cmd_attack(const AttackOpts& opts);

struct SweepOpts {
  DataSpec data;                     // chain source; fresh random weights per trial
  std::vector<double> scales{2, 4, 8, 10};
  std::vector<double> lambdas{0.0, 0.01, 0.1, 1.0};
  int trials = 100;
  std::uint64_t seed = 0;
  NotearsConfig solver;
  std::string out;
  std::optional<std::string> raw_out;
  bool force = false;
  int threads = 1;
};

struct SweepResult {
  std::vector<SweepCell> cells;   // scale-major, lambda-minor order
  std::vector<OutcomeRow> raw;    // trial-major order
};

// Chain-reversal sweep: per trial one dataset (fresh weights and noise), the
// root column scaled by each grid scale, the solver run at each lambda.
SweepResult run_reversal_sweep(const SweepOpts& opts);

int cmd_sweep(const SweepOpts& opts);

struct OracleOpts {
  std::optional<std::string> data_csv;  // otherwise drawn from `data`
  DataSpec data;
  std::uint64_t seed = 0;
  double penalty = 0.0;
  std::string out;                       // report CSV; summary lands next to it
  std::optional<std::string> graphs_out; // graph-JSON list
  std::optional<std::string> best_dag_out;
  bool conjecture1 = false;              // switches to the chain comparison mode
  int trials = 20;
  double margin = 2.0;
  bool force = false;
};

int cmd_oracle(const OracleOpts& opts);

struct SolveOpts {
  std::string data_csv;
  NotearsConfig solver;
  std::string out;
  bool force = false;
};

int cmd_solve(const SolveOpts& opts);

}  // namespace varattack
