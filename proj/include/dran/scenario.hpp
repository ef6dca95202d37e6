#pragma once

// Dense-RAN deployment: hexagonal three-sector sites, users dropped per
// sector, max-RSRP association, stochastic traffic and the per-slot network
// state that the power-management agents act on.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dran/radio.hpp"
#include "dran/rng.hpp"

namespace dran {

inline constexpr double kSlotSeconds = 1e-3;
inline constexpr double kMinUserDistanceM = 10.0;
inline constexpr int kSectorsPerBs = 3;

struct PowerConfig {
  double p_max_dbw = 15.2;
  double delta_p_max_db = 2.0;
  int levels = 5;  // kappa
};

struct TopologyConfig {
  int rings = 2;
  double isd_m = 500.0;
  double bs_height_m = 25.0;
  double fc_hz = 2.6e9;
  double tx_gain_dbi = 17.0;
  double rx_gain_dbi = 0.0;
  double backlobe_db = 25.0;
  double path_loss_exponent = 1.0;
  PowerConfig power;
  // Appended after the hexagonal sites, in order.
  std::vector<Position> extra_sites;
};

struct Topology {
  std::vector<Position> bs_positions;
  std::array<double, kSectorsPerBs> sector_boresights_deg{30.0, 150.0, 270.0};
  double isd_m = 500.0;
  std::vector<PowerDbw> power_levels;  // ascending, back() == P_max
  double backlobe_attenuation_db = 25.0;
  double tx_gain = 1.0;  // linear
  double rx_gain = 1.0;  // linear
  double fc_hz = 2.6e9;
  double path_loss_exponent = 1.0;

  int num_bs() const { return static_cast<int>(bs_positions.size()); }
  int kappa() const { return static_cast<int>(power_levels.size()); }
  PowerDbw p_max() const { return power_levels.back(); }

  // True when p falls inside the 120 degree arc of the given sector.
  bool in_sector(int bs, int sector, const Position& p) const;

  // Gain from one sector antenna to a receiver: full transmit gain inside the
  // arc, backlobe-attenuated outside it.
  ChannelGain sector_gain(int bs, int sector, const Position& p) const;
};

// kappa evenly spaced levels over [p_max - delta, p_max].
std::vector<PowerDbw> make_power_levels(const PowerConfig& cfg);

// Site count is 1 + 3 r (r + 1) plus any extra sites.
Topology build_topology(const TopologyConfig& cfg);

// per_sector users per sector, uniform by area over the arc of the annulus
// [10 m, isd/2] around each site. Order: site, sector, index.
std::vector<Position> drop_users(const Topology& topo, int per_sector, double ue_height_m,
                                 RngStream& rng);

struct Association {
  int bs = -1;
  int sector = -1;
  friend bool operator==(const Association&, const Association&) = default;
};

// Strongest serving RSRP with every BS at the reference power; ties go to
// the lowest BS id, then the lowest sector.
std::vector<Association> associate_max_rsrp(const Topology& topo, std::span<const Position> users,
                                            PowerDbw reference_power);

struct TrafficConfig {
  double arrival_prob = 0.05;        // p0, per idle user per slot
  double modulation_period = 1000.;  // slots; 0 disables the sinusoidal modulation
  double volume_lo_bits = 2e4;
  double volume_hi_bits = 2e5;
};

struct TrafficRequest {
  int user = -1;
  double volume_bits = 0.0;
  int arrival_step = 0;
};

double arrival_probability(int t, const TrafficConfig& cfg);

// One Bernoulli draw per idle user, then one volume draw per request.
std::vector<TrafficRequest> generate_traffic(int t, std::span<const std::uint8_t> idle,
                                             RngStream& rng, const TrafficConfig& cfg);

struct EpisodeState {
  int t = 0;
  std::vector<double> residual_bits;      // per user
  std::vector<int> arrival_step;          // per user, -1 when idle
  std::vector<double> rsrp_w;             // per user, serving RSRP at P_max
  std::vector<Association> association;   // per user
  std::vector<std::uint8_t> phi;          // per BS
  std::vector<PowerDbw> current_power;    // per BS
  std::vector<int> scheduled;             // per (BS, sector), -1 when empty

  int num_bs() const { return static_cast<int>(phi.size()); }
  int scheduled_user(int bs, int sector) const { return scheduled[bs * kSectorsPerBs + sector]; }
  int active_count() const;
};

// Fresh state: everyone idle, every BS at P_max.
EpisodeState initial_state(const Topology& topo, std::span<const Position> users);

// Refresh rsrp/association for (possibly moved) users.
void update_radio_reports(EpisodeState& state, const Topology& topo,
                          std::span<const Position> users);

void apply_requests(EpisodeState& state, std::span<const TrafficRequest> requests);

// One user per sector, oldest pending request first (FIFO, ties by user id);
// recomputes phi from the result.
void schedule(EpisodeState& state);

// Drain residual volumes by rate * slot (clamped at zero), release completed
// users and step time. Rates are per user in bit/s; unscheduled users must be 0.
EpisodeState advance(const EpisodeState& state, std::span<const double> user_rate_bps);

struct MobilityConfig {
  double speed_mps = 0.0;  // 0 keeps users static
};

// Random-waypoint walker confined to each user's home annulus.
class Mobility {
 public:
  Mobility(const Topology& topo, std::span<const Position> users, const MobilityConfig& cfg,
           std::uint64_t seed);
  bool enabled() const { return cfg_.speed_mps > 0.0; }
  void step(std::vector<Position>& users);

 private:
  Position draw_waypoint(int user);

  const Topology* topo_;
  MobilityConfig cfg_;
  RngStream rng_;
  std::vector<int> home_site_;
  std::vector<Position> waypoints_;
};

}  // namespace dran
