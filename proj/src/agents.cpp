#include "dran/agents.hpp"

#include <string>

#include "dran/errors.hpp"

namespace dran {

std::string to_string(AgentKind k) {
  switch (k) {
    case AgentKind::kDqn:
      return "dqn";
    case AgentKind::kQLearning:
      return "qlearning";
    case AgentKind::kSleep:
      return "sleep";
  }
  return "unknown";
}

AgentKind parse_agent(const std::string& s) {
  if (s == "dqn") return AgentKind::kDqn;
  if (s == "qlearning") return AgentKind::kQLearning;
  if (s == "sleep") return AgentKind::kSleep;
  throw ValidationError("agent", "unknown agent '" + s + "' (dqn, qlearning, sleep)");
}

namespace {

Decision sleep_decision(const Observation& obs, PowerDbw p_max) {
  Decision d;
  d.action.assign(obs.num_bs(), -1);
  d.power.assign(obs.num_bs(), p_max);
  d.result = summarize(obs.links, d.link_rate_bps, d.power, obs.c_max);
  return d;
}

}  // namespace

Decision evaluate_action(const Observation& obs, std::span<const PowerDbw> levels,
                         std::span<const int> action) {
  Decision d;
  d.action.assign(obs.num_bs(), -1);
  d.power.assign(obs.num_bs(), levels.back());
  for (int b : obs.active) {
    d.action[b] = action[b];
    d.power[b] = levels[action[b]];
  }
  d.link_rate_bps.resize(obs.links.num_links());
  kernels::omp::link_rates(obs.links, d.power, d.link_rate_bps);
  d.result = summarize(obs.links, d.link_rate_bps, d.power, obs.c_max);
  return d;
}

kernels::OracleResult exhaustive_oracle(const Observation& obs, std::span<const PowerDbw> levels,
                                        Backend backend) {
  return backend == Backend::kOmp ? kernels::omp::enumerate_oracle(obs.links, levels, obs.c_max)
                                  : kernels::serial::enumerate_oracle(obs.links, levels, obs.c_max);
}

// ---------------------------------------------------------------------------

SearchAgent::SearchAgent(const AgentParams& p, std::vector<PowerDbw> levels, std::uint64_t seed)
    : params_(p), levels_(std::move(levels)), explore_rng_(seed, streams::kExploration) {}

Decision SearchAgent::act(const Observation& obs, bool terminal) {
  records_.clear();
  if (obs.all_sleep()) {
    end_episode();
    return sleep_decision(obs, levels_.back());
  }

  const int nb = obs.num_bs();
  const int na = static_cast<int>(obs.active.size());
  const int nl = obs.links.num_links();
  const int iters = params_.iterations;

  std::vector<Features> s(nb, Features{});
  std::vector<std::vector<double>> q(na);
  for (int i = 0; i < na; ++i) {
    const int b = obs.active[i];
    s[b] = normalize(obs.state[b], params_.scales);
    q[i] = q_values(s[b]);
  }

  // selection first, then joint evaluation of every candidate
  std::vector<int> actions(static_cast<std::size_t>(iters) * na);
  std::vector<PowerDbw> power(static_cast<std::size_t>(iters) * nb, levels_.back());
  for (int n = 0; n < iters; ++n) {
    for (int i = 0; i < na; ++i) {
      const int a = epsilon_greedy(q[i], params_.epsilon, explore_rng_);
      actions[static_cast<std::size_t>(n) * na + i] = a;
      power[static_cast<std::size_t>(n) * nb + obs.active[i]] = levels_[a];
    }
  }
  std::vector<double> rates(static_cast<std::size_t>(iters) * nl);
  if (params_.backend == Backend::kOmp) {
    kernels::omp::batch_link_rates(obs.links, power, rates);
  } else {
    kernels::serial::batch_link_rates(obs.links, power, rates);
  }

  int best = -1;
  double best_score = 0.0;
  std::vector<Features> s_next(nb, Features{});
  std::vector<Features> best_next;
  records_.reserve(iters);
  for (int n = 0; n < iters; ++n) {
    const std::span<const double> r(rates.data() + static_cast<std::size_t>(n) * nl, nl);
    const std::span<const PowerDbw> p(power.data() + static_cast<std::size_t>(n) * nb, nb);
    const auto jr = summarize(obs.links, r, p, obs.c_max);

    IterationRecord rec;
    rec.n = n + 1;
    rec.action.assign(actions.begin() + static_cast<std::ptrdiff_t>(n) * na,
                      actions.begin() + static_cast<std::ptrdiff_t>(n + 1) * na);
    rec.sum_delta_c_bps = jr.sum_delta_c_bps;
    rec.feasible = jr.feasible;
    double score = 0.0;
    for (int i = 0; i < na; ++i) {
      const int b = obs.active[i];
      s_next[b] = normalize(post_decision_state(obs, b, r), params_.scales);
      const double v = jr.network_ee + (terminal ? 0.0 : params_.lambda * bootstrap(s_next[b]));
      rec.values.push_back(v);
      score += v;
    }
    if (jr.feasible && (best < 0 || score > best_score)) {
      best = n;
      best_score = score;
      best_next = s_next;
    }
    records_.push_back(std::move(rec));
  }

  Decision d;
  if (best < 0) {
    // defensive: the all-P_max reference is feasible by construction
    std::vector<int> top(nb, static_cast<int>(levels_.size()) - 1);
    d = evaluate_action(obs, levels_, top);
    d.zeta = 0;
    d.n_star = iters;
  } else {
    d.action.assign(nb, -1);
    for (int i = 0; i < na; ++i) d.action[obs.active[i]] = actions[static_cast<std::size_t>(best) * na + i];
    d.power.assign(power.begin() + static_cast<std::ptrdiff_t>(best) * nb,
                   power.begin() + static_cast<std::ptrdiff_t>(best + 1) * nb);
    d.link_rate_bps.assign(rates.begin() + static_cast<std::ptrdiff_t>(best) * nl,
                           rates.begin() + static_cast<std::ptrdiff_t>(best + 1) * nl);
    d.result = summarize(obs.links, d.link_rate_bps, d.power, obs.c_max);
    d.zeta = 1;
    d.n_star = best + 1;
    accept(obs, d, s, best_next, terminal);
  }
  end_episode();
  return d;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> layer_sizes(const AgentParams& p, int kappa) {
  std::vector<int> sizes{kStateDim};
  sizes.insert(sizes.end(), p.hidden.begin(), p.hidden.end());
  sizes.push_back(kappa);
  return sizes;
}

QNetwork init_network(const AgentParams& p, int kappa, std::uint64_t seed) {
  RngStream rng(seed, streams::kNetworkInit);
  return QNetwork::he_uniform(layer_sizes(p, kappa), p.activation, rng);
}

}  // namespace

DqnAgent::DqnAgent(const AgentParams& p, std::vector<PowerDbw> levels, std::uint64_t seed)
    : SearchAgent(p, std::move(levels), seed),
      pred_(init_network(p, static_cast<int>(levels_.size()), seed)),
      target_(pred_),
      memory_(static_cast<std::size_t>(p.replay_capacity)),
      replay_rng_(seed, streams::kReplay) {
  target_.set_role(QNetwork::Role::kTarget);
}

void DqnAgent::set_weights(const QNetwork& net) {
  if (net.sizes() != pred_.sizes()) {
    throw ArchitectureMismatch("initial weights do not match the configured network");
  }
  sync_target(net, pred_);
  sync_target(net, target_);
}

std::vector<double> DqnAgent::q_values(const Features& s) const { return pred_.forward(s); }

double DqnAgent::bootstrap(const Features& s_next) const {
  const auto q = target_.forward(s_next);
  return q[argmax(q)];
}

void DqnAgent::accept(const Observation& obs, const Decision& d, const std::vector<Features>& s,
                      const std::vector<Features>& s_next, bool terminal) {
  const double sum_dc = d.result.sum_delta_c_bps;
  if (!(sum_dc >= 0.0)) {
    throw InvariantViolation("replay push with sum of rate deltas " + std::to_string(sum_dc) + " < 0");
  }
  for (int b : obs.active) {
    memory_.push({s[b], d.action[b], d.result.network_ee, s_next[b], terminal, sum_dc});
  }
}

void DqnAgent::end_episode() {
  ++episodes_;
  if (episodes_ % params_.train_interval != 0) return;
  if (!(memory_.size() > static_cast<std::size_t>(params_.minibatch))) return;
  train_round();
}

void DqnAgent::train_round() {
  for (int k = 0; k < params_.train_steps; ++k) {
    const auto batch = memory_.sample_minibatch(params_.minibatch, replay_rng_);
    const auto y = td_targets(batch, target_, params_.lambda);
    last_loss_ = backward_and_step(pred_, batch, y, params_.learning_rate, params_.backend);
  }
  ++rounds_;
  if (rounds_ % params_.target_sync == 0) sync_target(pred_, target_);
}

// ---------------------------------------------------------------------------

QLearningAgent::QLearningAgent(const AgentParams& p, std::vector<PowerDbw> levels,
                               std::uint64_t seed)
    : SearchAgent(p, std::move(levels), seed),
      table_(p.q_bins, static_cast<int>(levels_.size())) {}

std::vector<double> QLearningAgent::q_values(const Features& s) const {
  const auto row = table_.row(table_.bin_of(s));
  return {row.begin(), row.end()};
}

double QLearningAgent::bootstrap(const Features& s_next) const {
  return table_.max_q(table_.bin_of(s_next));
}

void QLearningAgent::accept(const Observation& obs, const Decision& d,
                            const std::vector<Features>& s, const std::vector<Features>& s_next,
                            bool terminal) {
  if (!(d.result.sum_delta_c_bps >= 0.0)) {
    throw InvariantViolation("accepted action violates the rate constraint");
  }
  for (int b : obs.active) {
    tabular_q_update(table_, table_.bin_of(s[b]), d.action[b], d.result.network_ee,
                     table_.bin_of(s_next[b]), params_.lambda, params_.q_alpha, terminal);
  }
}

// ---------------------------------------------------------------------------

SleepAgent::SleepAgent(std::vector<PowerDbw> levels) : levels_(std::move(levels)) {}

Decision SleepAgent::act(const Observation& obs, bool) {
  records_.clear();
  if (obs.all_sleep()) return sleep_decision(obs, levels_.back());
  std::vector<int> top(obs.num_bs(), static_cast<int>(levels_.size()) - 1);
  auto d = evaluate_action(obs, levels_, top);
  d.zeta = 1;
  d.n_star = 0;
  return d;
}

std::unique_ptr<Agent> make_agent(AgentKind kind, const AgentParams& p,
                                  std::vector<PowerDbw> levels, std::uint64_t seed) {
  switch (kind) {
    case AgentKind::kDqn:
      return std::make_unique<DqnAgent>(p, std::move(levels), seed);
    case AgentKind::kQLearning:
      return std::make_unique<QLearningAgent>(p, std::move(levels), seed);
    case AgentKind::kSleep:
      return std::make_unique<SleepAgent>(std::move(levels));
  }
  throw InvalidConfig("unknown agent kind");
}

}  // namespace dran
