#include "dran/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dran {

namespace {

double deg2rad(double d) { return d * kPi / 180.0; }

// Wraps an angle difference into (-180, 180].
double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

}  // namespace

bool Topology::in_sector(int bs, int sector, const Position& p) const {
  const auto& site = bs_positions[bs];
  const double az = std::atan2(p.y - site.y, p.x - site.x) * 180.0 / kPi;
  return std::abs(wrap_deg(az - sector_boresights_deg[sector])) <= 60.0;
}

ChannelGain Topology::sector_gain(int bs, int sector, const Position& p) const {
  double tx = tx_gain;
  if (!in_sector(bs, sector, p)) tx *= dbw_to_watts(-backlobe_attenuation_db);
  const double d = std::max(distance(bs_positions[bs], p), kMinDistanceM);
  return channel_gain(tx, rx_gain, fc_hz, d, path_loss_exponent);
}

std::vector<PowerDbw> make_power_levels(const PowerConfig& cfg) {
  if (cfg.levels < 2) throw InvalidConfig("power levels: kappa must be >= 2");
  if (!(cfg.delta_p_max_db > 0.0)) throw InvalidConfig("power levels: delta_p_max must be > 0");
  if (cfg.p_max_dbw - cfg.delta_p_max_db < kPowerGuardDbw) {
    throw InvalidConfig("power levels: lowest level falls below the 1 dBW guard");
  }
  std::vector<PowerDbw> levels(cfg.levels);
  const double step = cfg.delta_p_max_db / (cfg.levels - 1);
  for (int i = 0; i < cfg.levels; ++i) {
    levels[i] = PowerDbw(cfg.p_max_dbw - cfg.delta_p_max_db + i * step);
  }
  levels.back() = PowerDbw(cfg.p_max_dbw);
  return levels;
}

Topology build_topology(const TopologyConfig& cfg) {
  if (cfg.rings < 0) throw InvalidConfig("rings must be >= 0");
  if (!(cfg.isd_m > 2 * kMinUserDistanceM)) throw InvalidConfig("isd must exceed 20 m");
  if (!(cfg.fc_hz > 0.0)) throw InvalidConfig("fc must be positive");

  Topology topo;
  topo.isd_m = cfg.isd_m;
  topo.power_levels = make_power_levels(cfg.power);
  topo.backlobe_attenuation_db = cfg.backlobe_db;
  topo.tx_gain = dbw_to_watts(cfg.tx_gain_dbi);
  topo.rx_gain = dbw_to_watts(cfg.rx_gain_dbi);
  topo.fc_hz = cfg.fc_hz;
  topo.path_loss_exponent = cfg.path_loss_exponent;

  auto unit = [&](int i) {
    const double a = deg2rad(60.0 * (i % 6));
    return std::pair{cfg.isd_m * std::cos(a), cfg.isd_m * std::sin(a)};
  };
  topo.bs_positions.push_back({0.0, 0.0, cfg.bs_height_m});
  for (int k = 1; k <= cfg.rings; ++k) {
    for (int side = 0; side < 6; ++side) {
      const auto [cx, cy] = unit(side);
      const auto [sx, sy] = unit(side + 2);
      for (int j = 0; j < k; ++j) {
        topo.bs_positions.push_back({k * cx + j * sx, k * cy + j * sy, cfg.bs_height_m});
      }
    }
  }
  for (const auto& p : cfg.extra_sites) topo.bs_positions.push_back(p);
  return topo;
}

std::vector<Position> drop_users(const Topology& topo, int per_sector, double ue_height_m,
                                 RngStream& rng) {
  if (per_sector < 1) throw InvalidConfig("users per sector must be >= 1");
  const double r_lo = kMinUserDistanceM;
  const double r_hi = topo.isd_m / 2.0;
  std::vector<Position> users;
  users.reserve(static_cast<std::size_t>(topo.num_bs()) * kSectorsPerBs * per_sector);
  for (int b = 0; b < topo.num_bs(); ++b) {
    const auto& site = topo.bs_positions[b];
    for (int s = 0; s < kSectorsPerBs; ++s) {
      for (int k = 0; k < per_sector; ++k) {
        const double r = std::sqrt(rng.uniform(r_lo * r_lo, r_hi * r_hi));
        const double a = deg2rad(topo.sector_boresights_deg[s] + rng.uniform(-60.0, 60.0));
        users.push_back({site.x + r * std::cos(a), site.y + r * std::sin(a), ue_height_m});
      }
    }
  }
  return users;
}

std::vector<Association> associate_max_rsrp(const Topology& topo, std::span<const Position> users,
                                            PowerDbw reference_power) {
  const double p_w = dbw_to_watts(reference_power);
  std::vector<Association> out(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    double best = -1.0;
    for (int b = 0; b < topo.num_bs(); ++b) {
      for (int s = 0; s < kSectorsPerBs; ++s) {
        const double rsrp = p_w * topo.sector_gain(b, s, users[u]).value;
        if (rsrp > best) {
          best = rsrp;
          out[u] = {b, s};
        }
      }
    }
  }
  return out;
}

double arrival_probability(int t, const TrafficConfig& cfg) {
  double p = cfg.arrival_prob;
  if (cfg.modulation_period > 0.0) {
    p *= 1.0 + 0.5 * std::sin(2.0 * kPi * t / cfg.modulation_period);
  }
  return std::clamp(p, 0.0, 1.0);
}

std::vector<TrafficRequest> generate_traffic(int t, std::span<const std::uint8_t> idle,
                                             RngStream& rng, const TrafficConfig& cfg) {
  const double p = arrival_probability(t, cfg);
  std::vector<TrafficRequest> out;
  for (std::size_t u = 0; u < idle.size(); ++u) {
    if (!idle[u]) continue;
    if (!rng.bernoulli(p)) continue;
    out.push_back({static_cast<int>(u), rng.uniform(cfg.volume_lo_bits, cfg.volume_hi_bits), t});
  }
  return out;
}

int EpisodeState::active_count() const {
  return static_cast<int>(std::count(phi.begin(), phi.end(), std::uint8_t{1}));
}

EpisodeState initial_state(const Topology& topo, std::span<const Position> users) {
  EpisodeState st;
  const auto nu = users.size();
  st.residual_bits.assign(nu, 0.0);
  st.arrival_step.assign(nu, -1);
  st.phi.assign(topo.num_bs(), 0);
  st.current_power.assign(topo.num_bs(), topo.p_max());
  st.scheduled.assign(static_cast<std::size_t>(topo.num_bs()) * kSectorsPerBs, -1);
  update_radio_reports(st, topo, users);
  return st;
}

void update_radio_reports(EpisodeState& state, const Topology& topo,
                          std::span<const Position> users) {
  state.association = associate_max_rsrp(topo, users, topo.p_max());
  state.rsrp_w.resize(users.size());
  const double p_w = dbw_to_watts(topo.p_max());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& a = state.association[u];
    state.rsrp_w[u] = p_w * topo.sector_gain(a.bs, a.sector, users[u]).value;
  }
}

void apply_requests(EpisodeState& state, std::span<const TrafficRequest> requests) {
  for (const auto& r : requests) {
    state.residual_bits[r.user] = r.volume_bits;
    state.arrival_step[r.user] = r.arrival_step;
  }
}

void schedule(EpisodeState& state) {
  std::fill(state.scheduled.begin(), state.scheduled.end(), -1);
  for (std::size_t u = 0; u < state.residual_bits.size(); ++u) {
    if (!(state.residual_bits[u] > 0.0)) continue;
    const auto& a = state.association[u];
    int& slot = state.scheduled[a.bs * kSectorsPerBs + a.sector];
    // users are visited in id order, so a strict comparison keeps ties on the lower id
    if (slot < 0 || state.arrival_step[u] < state.arrival_step[slot]) slot = static_cast<int>(u);
  }
  std::fill(state.phi.begin(), state.phi.end(), std::uint8_t{0});
  for (int b = 0; b < state.num_bs(); ++b) {
    for (int s = 0; s < kSectorsPerBs; ++s) {
      if (state.scheduled_user(b, s) >= 0) state.phi[b] = 1;
    }
  }
}

EpisodeState advance(const EpisodeState& state, std::span<const double> user_rate_bps) {
  EpisodeState next = state;
  for (std::size_t u = 0; u < next.residual_bits.size(); ++u) {
    if (!(next.residual_bits[u] > 0.0)) continue;
    const double left = next.residual_bits[u] - user_rate_bps[u] * kSlotSeconds;
    if (left > 0.0) {
      next.residual_bits[u] = left;
    } else {
      next.residual_bits[u] = 0.0;
      next.arrival_step[u] = -1;
    }
  }
  next.t = state.t + 1;
  schedule(next);
  return next;
}

Mobility::Mobility(const Topology& topo, std::span<const Position> users,
                   const MobilityConfig& cfg, std::uint64_t seed)
    : topo_(&topo), cfg_(cfg), rng_(seed, streams::kMobility) {
  home_site_.resize(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < topo.num_bs(); ++b) {
      const double d = distance(topo.bs_positions[b], users[u]);
      if (d < best) {
        best = d;
        home_site_[u] = b;
      }
    }
  }
  if (enabled()) {
    waypoints_.resize(users.size());
    for (std::size_t u = 0; u < users.size(); ++u) {
      waypoints_[u] = draw_waypoint(static_cast<int>(u));
      waypoints_[u].o = users[u].o;
    }
  }
}

Position Mobility::draw_waypoint(int user) {
  const auto& site = topo_->bs_positions[home_site_[user]];
  const double r_lo = kMinUserDistanceM;
  const double r_hi = topo_->isd_m / 2.0;
  const double r = std::sqrt(rng_.uniform(r_lo * r_lo, r_hi * r_hi));
  const double a = rng_.uniform(0.0, 2.0 * kPi);
  return {site.x + r * std::cos(a), site.y + r * std::sin(a), 0.0};
}

void Mobility::step(std::vector<Position>& users) {
  if (!enabled()) return;
  const double hop = cfg_.speed_mps * kSlotSeconds;
  for (std::size_t u = 0; u < users.size(); ++u) {
    auto& p = users[u];
    const double dx = waypoints_[u].x - p.x;
    const double dy = waypoints_[u].y - p.y;
    const double d = std::hypot(dx, dy);
    if (d <= hop) {
      p.x = waypoints_[u].x;
      p.y = waypoints_[u].y;
      const double o = p.o;
      waypoints_[u] = draw_waypoint(static_cast<int>(u));
      waypoints_[u].o = o;
    } else {
      p.x += hop * dx / d;
      p.y += hop * dy / d;
    }
  }
}

}  // namespace dran
