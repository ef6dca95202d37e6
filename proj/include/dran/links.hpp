#pragma once

// Frozen radio snapshot of one slot and the evaluation of a joint power
// assignment on it.
//
// A LinkSet holds one link per scheduled user. cross_gain[l * num_bs + b] is
// the gain from every transmitting sector of BS b to the user of link l; it is
// zero for the serving BS and for sleeping BSs, which is how phi masks
// interference.

#include <cstdint>
#include <span>
#include <vector>

#include "dran/radio.hpp"
#include "dran/scenario.hpp"

namespace dran {

struct LinkSet {
  int num_bs = 0;
  std::vector<std::uint8_t> bs_active;
  std::vector<int> link_user;
  std::vector<int> link_bs;
  std::vector<double> serving_gain;
  std::vector<double> cross_gain;
  double bandwidth_hz = 10e6;
  double noise_w = 0.0;

  int num_links() const { return static_cast<int>(link_user.size()); }
  double cross(int link, int bs) const { return cross_gain[link * num_bs + bs]; }
};

LinkSet build_link_set(const Topology& topo, std::span<const Position> users,
                       const EpisodeState& state, double bandwidth_hz, double noise_w);

struct JointResult {
  std::vector<double> bs_rate_bps;  // sum over the BS's links
  std::vector<double> bs_ee;        // Mbps/dBW, 0 for sleeping BSs
  double sum_delta_c_bps = 0.0;
  double network_ee = 0.0;  // mean over active BSs
  double ee_all_b = 0.0;    // sum over active BSs divided by B
  bool feasible = false;    // sum_delta_c_bps >= 0
};

// Aggregates per-link rates of one candidate into per-BS figures. c_max holds
// the per-BS reference rates (all active BSs at P_max). Sleeping BSs are
// skipped; power entries for them are ignored.
JointResult summarize(const LinkSet& links, std::span<const double> link_rate_bps,
                      std::span<const PowerDbw> power, std::span<const double> c_max);

// Per-BS rates with every active BS at p_max.
std::vector<double> reference_rates(const LinkSet& links, PowerDbw p_max);

// Evaluates one joint assignment (serial path).
JointResult evaluate_joint(const LinkSet& links, std::span<const PowerDbw> power,
                           std::span<const double> c_max);

}  // namespace dran
