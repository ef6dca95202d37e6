#include "dran/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace dran {

namespace {

std::vector<Position> place_users(const SimConfig& cfg, const Topology& topo, std::uint64_t seed) {
  if (!cfg.fixed_users.empty()) return cfg.fixed_users;
  RngStream rng(seed, streams::kTopology);
  return drop_users(topo, cfg.users_per_sector, cfg.ue_height_m, rng);
}

}  // namespace

State post_decision_state(const Observation& obs, int bs, std::span<const double> link_rate_bps) {
  State s = obs.state[bs];
  if (obs.full_buffer) return s;
  double sum = 0.0;
  int n = 0;
  for (int l = 0; l < obs.links.num_links(); ++l) {
    if (obs.links.link_bs[l] != bs) continue;
    sum += std::max(0.0, obs.link_residual_bits[l] - link_rate_bps[l] * kSlotSeconds);
    ++n;
  }
  s.volume_bits = n > 0 ? sum / n : 0.0;
  return s;
}

Simulator::Simulator(const SimConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      topo_(build_topology(cfg.topology)),
      users_(place_users(cfg, topo_, seed)),
      state_(initial_state(topo_, users_)),
      traffic_rng_(seed, streams::kTraffic),
      mobility_(topo_, users_, cfg.mobility, seed),
      noise_w_(dbw_to_watts(cfg.noise_dbw)) {
  arrivals();
  schedule(state_);
}

void Simulator::arrivals() {
  if (cfg_.full_buffer) {
    for (std::size_t u = 0; u < users_.size(); ++u) {
      state_.residual_bits[u] = cfg_.traffic.volume_hi_bits;
      if (state_.arrival_step[u] < 0) state_.arrival_step[u] = state_.t;
    }
    return;
  }
  std::vector<std::uint8_t> idle(users_.size());
  for (std::size_t u = 0; u < users_.size(); ++u) idle[u] = state_.residual_bits[u] > 0.0 ? 0 : 1;
  const auto req = generate_traffic(state_.t, idle, traffic_rng_, cfg_.traffic);
  apply_requests(state_, req);
}

Observation Simulator::observe() const {
  Observation obs;
  obs.t = state_.t;
  obs.full_buffer = cfg_.full_buffer;
  obs.links = build_link_set(topo_, users_, state_, cfg_.bandwidth_hz, noise_w_);
  obs.c_max = reference_rates(obs.links, topo_.p_max());
  obs.state.assign(topo_.num_bs(), State{});
  for (int b = 0; b < topo_.num_bs(); ++b) {
    if (state_.phi[b]) obs.active.push_back(b);
  }
  std::vector<double> vol(topo_.num_bs(), 0.0);
  std::vector<double> rsrp(topo_.num_bs(), 0.0);
  std::vector<int> count(topo_.num_bs(), 0);
  for (int l = 0; l < obs.links.num_links(); ++l) {
    const int u = obs.links.link_user[l];
    const int b = obs.links.link_bs[l];
    obs.link_residual_bits.push_back(state_.residual_bits[u]);
    vol[b] += state_.residual_bits[u];
    rsrp[b] += state_.rsrp_w[u];
    ++count[b];
  }
  for (int b : obs.active) {
    obs.state[b].volume_bits = vol[b] / count[b];
    obs.state[b].rsrp_dbw = watts_to_dbw(rsrp[b] / count[b]);
  }
  return obs;
}

void Simulator::step(const Observation& obs, std::span<const PowerDbw> power,
                     std::span<const double> link_rate_bps) {
  for (int b = 0; b < topo_.num_bs(); ++b) state_.current_power[b] = power[b];
  std::vector<double> user_rate(users_.size(), 0.0);
  for (int l = 0; l < obs.links.num_links(); ++l) user_rate[obs.links.link_user[l]] = link_rate_bps[l];
  // advance() reschedules; arrivals and a second pass below pick up new users
  state_ = dran::advance(state_, user_rate);
  if (mobility_.enabled()) {
    mobility_.step(users_);
    update_radio_reports(state_, topo_, users_);
  }
  arrivals();
  schedule(state_);
}

}  // namespace dran
