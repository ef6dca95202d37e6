#pragma once

// Experiment orchestration behind the CLI subcommands.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dran/config.hpp"
#include "dran/metrics.hpp"

namespace dran {

struct RunSummary {
  AgentKind agent = AgentKind::kDqn;
  std::uint64_t seed = 0;
  int episodes = 0;
  int num_bs = 0;
  int num_users = 0;
  double ee_overall = 0.0;                   // mean of ee_avg_allB
  std::optional<double> ee_reward_mean;      // mean of ee_reward over defined episodes
  double throughput_overall_bps = 0.0;
  std::optional<double> power_overall_dbw;
  std::optional<double> rsrp_decline_overall_dbw;
  std::optional<double> itf_decline_overall_dbw;
  std::optional<double> success_overall;
  std::optional<double> iterations_overall;
  int training_rounds = 0;
  double wall_clock_s = 0.0;
};

struct RunHooks {
  // Called before the agent acts in slot t.
  std::function<void(int t, Agent& agent)> before;
  // Called after the decision, before the simulator steps.
  std::function<void(int t, const Observation& obs, const Decision& d, Agent& agent)> after;
};

struct RunOutput {
  RunSummary summary;
  std::vector<MetricsRow> rows;  // kept when requested
  std::string csv;               // full metrics.csv text
};

struct RunOptions {
  bool write_files = true;
  bool keep_rows = false;
  bool quiet = true;
  std::ostream* log = nullptr;
  RunHooks hooks;
};

RunOutput run_experiment(const RunConfig& cfg, const RunOptions& opt = {});

std::string summary_json(const RunSummary& s, const RunConfig& cfg);

// dqn, qlearning and sleep on the same seed; one directory each plus
// comparison.csv in cfg.out_dir.
std::vector<RunSummary> run_compare(const RunConfig& cfg, const RunOptions& opt = {});

// Cartesian product over cfg.sweep, run_XXX directories plus sweep.csv.
// workers = 0 picks the hardware concurrency.
std::vector<RunSummary> run_sweep(const RunConfig& cfg, int workers, const RunOptions& opt = {});

struct OracleStep {
  int t = 0;
  int active = 0;
  std::uint64_t evaluated = 0;
  std::optional<double> oracle_ee;
  std::optional<double> reference_ee;  // all active BSs at P_max
  std::vector<int> action;
};

// Exhaustive search on every slot of a (small) run; the oracle's action is
// applied to advance the traffic. Writes oracle.csv in cfg.out_dir.
std::vector<OracleStep> run_oracle(const RunConfig& cfg, const RunOptions& opt = {});

}  // namespace dran
