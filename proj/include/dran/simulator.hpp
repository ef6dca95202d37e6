#pragma once

// Slot-by-slot environment: owns the topology, the users and the traffic
// process, exposes a frozen observation per slot and applies the rates of the
// joint action chosen on it.

#include <cstdint>
#include <span>
#include <vector>

#include "dran/links.hpp"
#include "dran/rl.hpp"
#include "dran/scenario.hpp"

namespace dran {

struct SimConfig {
  TopologyConfig topology;
  int users_per_sector = 1;
  double ue_height_m = 1.5;
  // When non-empty these replace the random drop.
  std::vector<Position> fixed_users;
  TrafficConfig traffic;
  // Every user always holds V_hi bits: the observation never changes.
  bool full_buffer = false;
  MobilityConfig mobility;
  double bandwidth_hz = 10e6;
  double noise_dbw = -125.0;
};

struct Observation {
  int t = 0;
  LinkSet links;
  std::vector<double> c_max;       // per BS, every active BS at P_max
  std::vector<int> active;         // ascending BS ids with phi = 1
  std::vector<State> state;        // per BS (zero for sleepers)
  std::vector<double> link_residual_bits;
  bool full_buffer = false;

  int num_bs() const { return links.num_bs; }
  bool all_sleep() const { return active.empty(); }
};

// State of BS b after serving its links for one slot at the given rates,
// before new arrivals: the s' used for scoring and stored in transitions.
State post_decision_state(const Observation& obs, int bs, std::span<const double> link_rate_bps);

class Simulator {
 public:
  Simulator(const SimConfig& cfg, std::uint64_t seed);

  const Topology& topology() const { return topo_; }
  const std::vector<Position>& users() const { return users_; }
  const EpisodeState& state() const { return state_; }
  const SimConfig& config() const { return cfg_; }
  double noise_w() const { return noise_w_; }

  Observation observe() const;

  // Records the applied powers, drains the served volumes, moves users, draws
  // new requests and schedules the next slot. link_rate_bps follows the link
  // order of the observation.
  void step(const Observation& obs, std::span<const PowerDbw> power,
            std::span<const double> link_rate_bps);

 private:
  void arrivals();

  SimConfig cfg_;
  Topology topo_;
  std::vector<Position> users_;
  EpisodeState state_;
  RngStream traffic_rng_;
  Mobility mobility_;
  double noise_w_;
};

}  // namespace dran
