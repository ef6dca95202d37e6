#include "dran/links.hpp"

#include "dran/kernels.hpp"

namespace dran {

LinkSet build_link_set(const Topology& topo, std::span<const Position> users,
                       const EpisodeState& state, double bandwidth_hz, double noise_w) {
  LinkSet ls;
  ls.num_bs = topo.num_bs();
  ls.bs_active = state.phi;
  ls.bandwidth_hz = bandwidth_hz;
  ls.noise_w = noise_w;
  for (int b = 0; b < ls.num_bs; ++b) {
    for (int s = 0; s < kSectorsPerBs; ++s) {
      const int u = state.scheduled_user(b, s);
      if (u < 0) continue;
      ls.link_user.push_back(u);
      ls.link_bs.push_back(b);
      ls.serving_gain.push_back(topo.sector_gain(b, s, users[u]).value);
    }
  }
  const int nl = ls.num_links();
  ls.cross_gain.assign(static_cast<std::size_t>(nl) * ls.num_bs, 0.0);
  for (int l = 0; l < nl; ++l) {
    const auto& pos = users[ls.link_user[l]];
    for (int b = 0; b < ls.num_bs; ++b) {
      if (b == ls.link_bs[l] || !ls.bs_active[b]) continue;
      double g = 0.0;
      for (int s = 0; s < kSectorsPerBs; ++s) {
        if (state.scheduled_user(b, s) >= 0) g += topo.sector_gain(b, s, pos).value;
      }
      ls.cross_gain[static_cast<std::size_t>(l) * ls.num_bs + b] = g;
    }
  }
  return ls;
}

JointResult summarize(const LinkSet& links, std::span<const double> link_rate_bps,
                      std::span<const PowerDbw> power, std::span<const double> c_max) {
  JointResult r;
  r.bs_rate_bps.assign(links.num_bs, 0.0);
  r.bs_ee.assign(links.num_bs, 0.0);
  for (int l = 0; l < links.num_links(); ++l) r.bs_rate_bps[links.link_bs[l]] += link_rate_bps[l];

  double ee_sum = 0.0;
  int active = 0;
  for (int b = 0; b < links.num_bs; ++b) {
    if (!links.bs_active[b]) continue;
    r.bs_ee[b] = link_ee(r.bs_rate_bps[b], power[b]);
    ee_sum += r.bs_ee[b];
    r.sum_delta_c_bps += c_max[b] - r.bs_rate_bps[b];
    ++active;
  }
  if (active > 0) {
    r.network_ee = ee_sum / active;
    r.ee_all_b = ee_sum / links.num_bs;
  }
  r.feasible = r.sum_delta_c_bps >= 0.0;
  return r;
}

std::vector<double> reference_rates(const LinkSet& links, PowerDbw p_max) {
  std::vector<PowerDbw> power(links.num_bs, p_max);
  std::vector<double> rates(links.num_links());
  kernels::omp::link_rates(links, power, rates);
  std::vector<double> bs(links.num_bs, 0.0);
  for (int l = 0; l < links.num_links(); ++l) bs[links.link_bs[l]] += rates[l];
  return bs;
}

JointResult evaluate_joint(const LinkSet& links, std::span<const PowerDbw> power,
                           std::span<const double> c_max) {
  std::vector<double> rates(links.num_links());
  kernels::serial::link_rates(links, power, rates);
  return summarize(links, rates, power, c_max);
}

}  // namespace dran
