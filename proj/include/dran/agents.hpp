#pragma once

// Power-management policies. Each one turns an observation into a joint
// power assignment for the active BSs.
//
// The learning agents run the same inner search: N iterations, each drawing
// one epsilon-greedy action per active BS and then evaluating the joint
// assignment. Every BS scores R + lambda max_a' Q(s'_b, a') where R is the
// network EE of the joint assignment and s'_b the post-decision state; the
// accepted iteration is the feasible one with the largest sum (first wins
// ties). Feasible means sum_b (C_max - C) >= 0.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dran/kernels.hpp"
#include "dran/qnetwork.hpp"
#include "dran/rl.hpp"
#include "dran/simulator.hpp"

namespace dran {

enum class AgentKind { kDqn, kQLearning, kSleep };

std::string to_string(AgentKind k);
AgentKind parse_agent(const std::string& s);

struct AgentParams {
  double lambda = 0.9;
  double epsilon = 0.1;
  double learning_rate = 1e-3;
  int iterations = 100;        // N
  int train_interval = 500;    // T_m
  int replay_capacity = 5000;  // |D|
  int minibatch = 1000;        // |D_m|
  int target_sync = 10;        // K, in training rounds
  int train_steps = 1;         // gradient steps per training round
  std::vector<int> hidden{64, 64};
  Activation activation = Activation::kRelu;
  double q_alpha = 0.1;
  int q_bins = 16;
  Backend backend = Backend::kOmp;
  StateScales scales;
};

struct IterationRecord {
  int n = 0;                   // 1-based
  std::vector<int> action;     // per active BS, in ascending BS order
  std::vector<double> values;  // per active BS
  double sum_delta_c_bps = 0.0;
  bool feasible = false;
};

struct Decision {
  std::vector<int> action;         // level index per BS, -1 for sleepers
  std::vector<PowerDbw> power;     // per BS; sleepers carry P_max but transmit nothing
  std::vector<double> link_rate_bps;
  JointResult result;
  std::optional<int> zeta;    // absent when every BS sleeps
  std::optional<int> n_star;  // absent when every BS sleeps
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentKind kind() const = 0;
  // terminal marks the last slot of the run: no bootstrap beyond it.
  virtual Decision act(const Observation& obs, bool terminal) = 0;
  virtual void set_epsilon(double) {}
  const std::vector<IterationRecord>& last_iterations() const { return records_; }

 protected:
  std::vector<IterationRecord> records_;
};

class SearchAgent : public Agent {
 public:
  SearchAgent(const AgentParams& p, std::vector<PowerDbw> levels, std::uint64_t seed);
  void set_epsilon(double e) override { params_.epsilon = e; }
  const AgentParams& params() const { return params_; }
  Decision act(const Observation& obs, bool terminal) final;

 protected:
  virtual std::vector<double> q_values(const Features& s) const = 0;
  virtual double bootstrap(const Features& s_next) const = 0;
  virtual void accept(const Observation& obs, const Decision& d,
                      const std::vector<Features>& s, const std::vector<Features>& s_next,
                      bool terminal) = 0;
  virtual void end_episode() {}

  AgentParams params_;
  std::vector<PowerDbw> levels_;
  RngStream explore_rng_;
};

class DqnAgent final : public SearchAgent {
 public:
  DqnAgent(const AgentParams& p, std::vector<PowerDbw> levels, std::uint64_t seed);
  AgentKind kind() const override { return AgentKind::kDqn; }

  const QNetwork& predicted() const { return pred_; }
  const QNetwork& target() const { return target_; }
  void set_weights(const QNetwork& net);
  const ReplayMemory& memory() const { return memory_; }
  int training_rounds() const { return rounds_; }
  double last_loss() const { return last_loss_; }

 protected:
  std::vector<double> q_values(const Features& s) const override;
  double bootstrap(const Features& s_next) const override;
  void accept(const Observation& obs, const Decision& d, const std::vector<Features>& s,
              const std::vector<Features>& s_next, bool terminal) override;
  void end_episode() override;

 private:
  void train_round();

  QNetwork pred_;
  QNetwork target_;
  ReplayMemory memory_;
  RngStream replay_rng_;
  long episodes_ = 0;
  int rounds_ = 0;
  double last_loss_ = 0.0;
};

class QLearningAgent final : public SearchAgent {
 public:
  QLearningAgent(const AgentParams& p, std::vector<PowerDbw> levels, std::uint64_t seed);
  AgentKind kind() const override { return AgentKind::kQLearning; }
  const QTable& table() const { return table_; }

 protected:
  std::vector<double> q_values(const Features& s) const override;
  double bootstrap(const Features& s_next) const override;
  void accept(const Observation& obs, const Decision& d, const std::vector<Features>& s,
              const std::vector<Features>& s_next, bool terminal) override;

 private:
  QTable table_;
};

// Loaded BSs transmit at P_max, idle ones sleep. No search: n* = 0.
class SleepAgent final : public Agent {
 public:
  explicit SleepAgent(std::vector<PowerDbw> levels);
  AgentKind kind() const override { return AgentKind::kSleep; }
  Decision act(const Observation& obs, bool terminal) override;

 private:
  std::vector<PowerDbw> levels_;
};

std::unique_ptr<Agent> make_agent(AgentKind kind, const AgentParams& p,
                                  std::vector<PowerDbw> levels, std::uint64_t seed);

// Full enumeration of the active BSs' levels; feasible EE maximizer, ties to
// the lexicographically smallest action. Throws SearchSpaceTooLarge beyond
// 1e6 joint actions.
kernels::OracleResult exhaustive_oracle(const Observation& obs, std::span<const PowerDbw> levels,
                                        Backend backend = Backend::kOmp);

// Evaluates a full joint action (sleepers ignored) on the observation.
Decision evaluate_action(const Observation& obs, std::span<const PowerDbw> levels,
                         std::span<const int> action);

}  // namespace dran
