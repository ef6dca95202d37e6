#pragma once

// Reinforcement-learning substrate: per-BS state encoding, transitions and
// replay memory, TD targets and loss, epsilon-greedy, discounted returns,
// the empirical selection probability and the tabular Q baseline.

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "dran/qnetwork.hpp"
#include "dran/rng.hpp"

namespace dran {

inline constexpr int kStateDim = 2;
using Features = std::array<double, kStateDim>;

// Raw per-BS observation: mean residual volume of the scheduled users and the
// mean serving RSRP they report.
struct State {
  double volume_bits = 0.0;
  double rsrp_dbw = 0.0;
};

struct StateScales {
  double volume_bits = 2e5;        // V_hi
  double rsrp_floor_dbw = -125.0;  // noise floor
  double rsrp_span_db = 125.0;     // floor to 0 dBW
};

Features normalize(const State& s, const StateScales& sc);
State denormalize(const Features& f, const StateScales& sc);

struct Transition {
  Features s{};
  int a = 0;
  double r = 0.0;
  Features s_next{};
  bool terminal = false;
  double sum_delta_c_bps = 0.0;  // of the joint action the tuple came from
};

class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(const Transition& tr);
  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return buf_.empty(); }
  const Transition& operator[](std::size_t i) const { return buf_[i]; }

  // Uniform without replacement; requires size() > n.
  std::vector<std::size_t> sample_indices(std::size_t n, RngStream& rng) const;
  std::vector<Transition> sample_minibatch(std::size_t n, RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> buf_;
};

// r + lambda * max_a' Q(s', a'; W_o), or r alone on terminal transitions.
double td_target(double r, const Features& s_next, bool terminal, const QNetwork& target_net,
                 double lambda);

std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target_net,
                               double lambda);

// (1/(2m)) sum (Q(s,a;W_p) - y)^2.
double minibatch_loss(std::span<const Transition> batch, const QNetwork& pred,
                      const QNetwork& target, double lambda);

enum class Backend { kOmp, kSerial };

// One gradient step on the loss with the targets held fixed. Returns the loss
// before the step.
double backward_and_step(QNetwork& net, std::span<const Transition> batch,
                         std::span<const double> targets, double lr, Backend backend = Backend::kOmp);

// Bitwise copy of the predicted parameters into the target network.
void sync_target(const QNetwork& pred, QNetwork& target);

// Index of the largest entry, ties to the lowest index.
int argmax(std::span<const double> q);

// One uniform draw decides explore vs exploit; exploring draws a second one.
int epsilon_greedy(std::span<const double> q, double epsilon, RngStream& rng);

// sum_k lambda^k r_{k+1}, evaluated by the backward recursion G = r + lambda G'.
double discounted_return(std::span<const double> rewards, double lambda);

struct PolicyProb {
  double greedy_branch = 0.0;   // |D^a| / |D|
  double explore_branch = 0.0;  // 1 / kappa
  double prob = 0.0;            // (1 - eps) greedy + eps explore
};

PolicyProb empirical_policy_prob(const ReplayMemory& mem, int a, double epsilon, int kappa);
std::vector<double> empirical_policy_distribution(const ReplayMemory& mem, double epsilon, int kappa);

// Uniform bins x bins grid over the unit square of normalized features.
class QTable {
 public:
  QTable(int bins, int kappa);

  int bins() const { return bins_; }
  int kappa() const { return kappa_; }
  int num_states() const { return bins_ * bins_; }
  int bin_of(const Features& f) const;

  double& at(int s, int a) { return q_[static_cast<std::size_t>(s) * kappa_ + a]; }
  double at(int s, int a) const { return q_[static_cast<std::size_t>(s) * kappa_ + a]; }
  std::span<const double> row(int s) const {
    return {q_.data() + static_cast<std::size_t>(s) * kappa_, static_cast<std::size_t>(kappa_)};
  }
  double max_q(int s) const;

 private:
  int bins_;
  int kappa_;
  std::vector<double> q_;
};

// Q(s,a) += alpha (r + lambda max_a' Q(s',a') - Q(s,a)); terminal drops the bootstrap.
void tabular_q_update(QTable& table, int s_bin, int a, double r, int s_next_bin, double lambda,
                      double alpha, bool terminal = false);

}  // namespace dran
