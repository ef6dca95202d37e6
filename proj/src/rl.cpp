#include "dran/rl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dran/errors.hpp"
#include "dran/kernels.hpp"

namespace dran {

Features normalize(const State& s, const StateScales& sc) {
  return {s.volume_bits / sc.volume_bits, (s.rsrp_dbw - sc.rsrp_floor_dbw) / sc.rsrp_span_db};
}

State denormalize(const Features& f, const StateScales& sc) {
  return {f[0] * sc.volume_bits, f[1] * sc.rsrp_span_db + sc.rsrp_floor_dbw};
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidConfig("replay capacity must be positive");
}

void ReplayMemory::push(const Transition& tr) {
  buf_.push_back(tr);
  if (buf_.size() > capacity_) buf_.pop_front();
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t n, RngStream& rng) const {
  if (!(buf_.size() > n)) {
    throw InsufficientSamples("replay memory holds " + std::to_string(buf_.size()) +
                              " transitions, need more than " + std::to_string(n));
  }
  // partial Fisher-Yates
  std::vector<std::size_t> idx(buf_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.uniform_index(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

std::vector<Transition> ReplayMemory::sample_minibatch(std::size_t n, RngStream& rng) const {
  std::vector<Transition> out;
  out.reserve(n);
  for (auto i : sample_indices(n, rng)) out.push_back(buf_[i]);
  return out;
}

double td_target(double r, const Features& s_next, bool terminal, const QNetwork& target_net,
                 double lambda) {
  if (terminal) return r;
  const auto q = target_net.forward(s_next);
  return r + lambda * *std::max_element(q.begin(), q.end());
}

std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target_net,
                               double lambda) {
  std::vector<double> y(batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    y[k] = td_target(batch[k].r, batch[k].s_next, batch[k].terminal, target_net, lambda);
  }
  return y;
}

double minibatch_loss(std::span<const Transition> batch, const QNetwork& pred,
                      const QNetwork& target, double lambda) {
  double sq = 0.0;
  for (const auto& tr : batch) {
    const double y = td_target(tr.r, tr.s_next, tr.terminal, target, lambda);
    const double e = pred.forward(tr.s)[tr.a] - y;
    sq += e * e;
  }
  return sq / (2.0 * static_cast<double>(batch.size()));
}

double backward_and_step(QNetwork& net, std::span<const Transition> batch,
                         std::span<const double> targets, double lr, Backend backend) {
  std::vector<double> features;
  std::vector<int> actions;
  features.reserve(batch.size() * kStateDim);
  actions.reserve(batch.size());
  for (const auto& tr : batch) {
    features.insert(features.end(), tr.s.begin(), tr.s.end());
    actions.push_back(tr.a);
  }
  const kernels::BatchView view{features, actions, targets};
  QNetwork::Gradients grads;
  const double loss = backend == Backend::kOmp ? kernels::omp::minibatch_gradient(net, view, grads)
                                               : kernels::serial::minibatch_gradient(net, view, grads);
  net.apply_gradients(grads, lr);
  return loss;
}

void sync_target(const QNetwork& pred, QNetwork& target) {
  if (!pred.same_architecture(target)) {
    throw ArchitectureMismatch("sync_target: predicted and target layer sizes differ");
  }
  auto& dst = target.layers();
  const auto& src = pred.layers();
  for (std::size_t l = 0; l < src.size(); ++l) {
    dst[l].weight = src[l].weight;
    dst[l].bias = src[l].bias;
  }
}

int argmax(std::span<const double> q) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

int epsilon_greedy(std::span<const double> q, double epsilon, RngStream& rng) {
  if (rng.uniform() < epsilon) return static_cast<int>(rng.uniform_index(q.size()));
  return argmax(q);
}

double discounted_return(std::span<const double> rewards, double lambda) {
  double g = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) g = rewards[i] + lambda * g;
  return g;
}

PolicyProb empirical_policy_prob(const ReplayMemory& mem, int a, double epsilon, int kappa) {
  if (mem.empty()) throw EmptyMemory("empirical_policy_prob: replay memory is empty");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < mem.size(); ++i) hits += mem[i].a == a ? 1 : 0;
  PolicyProb p;
  p.greedy_branch = static_cast<double>(hits) / static_cast<double>(mem.size());
  p.explore_branch = 1.0 / kappa;
  p.prob = (1.0 - epsilon) * p.greedy_branch + epsilon * p.explore_branch;
  return p;
}

std::vector<double> empirical_policy_distribution(const ReplayMemory& mem, double epsilon,
                                                  int kappa) {
  std::vector<double> out(kappa);
  for (int a = 0; a < kappa; ++a) out[a] = empirical_policy_prob(mem, a, epsilon, kappa).prob;
  return out;
}

QTable::QTable(int bins, int kappa) : bins_(bins), kappa_(kappa) {
  if (bins < 1 || kappa < 1) throw InvalidConfig("q table needs at least one bin and one action");
  q_.assign(static_cast<std::size_t>(bins) * bins * kappa, 0.0);
}

int QTable::bin_of(const Features& f) const {
  auto one = [&](double x) {
    const int i = static_cast<int>(std::floor(x * bins_));
    return std::clamp(i, 0, bins_ - 1);
  };
  return one(f[0]) * bins_ + one(f[1]);
}

double QTable::max_q(int s) const {
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

void tabular_q_update(QTable& table, int s_bin, int a, double r, int s_next_bin, double lambda,
                      double alpha, bool terminal) {
  const double boot = terminal ? 0.0 : lambda * table.max_q(s_next_bin);
  double& q = table.at(s_bin, a);
  q += alpha * (r + boot - q);
}

}  // namespace dran
