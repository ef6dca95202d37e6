#include "dran/radio.hpp"

#include <string>

namespace dran {

double watts_to_dbw(double watts) {
  if (!(watts > 0.0)) {
    throw NonPositivePower("watts_to_dbw: power must be positive, got " + std::to_string(watts));
  }
  return 10.0 * std::log10(watts);
}

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.o - b.o;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ChannelGain channel_gain(double tx_gain, double rx_gain, double fc_hz, double distance_m,
                         double exponent) {
  if (distance_m < kMinDistanceM) {
    throw DistanceTooSmall("channel_gain: distance " + std::to_string(distance_m) +
                           " m below the 1 m floor");
  }
  const double free_space = kSpeedOfLight / (4.0 * kPi * fc_hz * distance_m);
  return ChannelGain(tx_gain * std::pow(free_space, exponent) * rx_gain);
}

LinkBudget link_budget(PowerDbw serving_power, ChannelGain serving_gain,
                       std::span<const Interferer> interferers, double noise_w) {
  LinkBudget lb;
  lb.serving_rsrp = dbw_to_watts(serving_power) * serving_gain.value;
  for (const auto& it : interferers) {
    if (it.active) lb.interference += dbw_to_watts(it.power) * it.gain.value;
  }
  lb.noise = noise_w;
  return lb;
}

double sinr(const LinkBudget& lb) { return lb.serving_rsrp / (lb.interference + lb.noise); }

double data_rate(double bandwidth_hz, double sinr_linear) {
  return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

PowerRateDelta power_and_rate_delta(bool active, PowerDbw p_now, PowerDbw p_max, double c_now_bps,
                                    double c_max_bps) {
  if (!active) return {};
  return {p_max.value - p_now.value, c_max_bps - c_now_bps};
}

double link_ee(double c_bps, PowerDbw p) {
  if (p.value < kPowerGuardDbw) {
    throw PowerGuardViolation("link_ee: power " + std::to_string(p.value) +
                              " dBW below the 1 dBW guard");
  }
  return (c_bps / 1e6) / p.value;
}

double network_ee(std::span<const BsEfficiency> per_bs) {
  double sum = 0.0;
  int active = 0;
  for (const auto& b : per_bs) {
    if (!b.active) continue;
    sum += b.ee;
    ++active;
  }
  if (active == 0) throw NoActiveBs("network_ee: no active BS");
  return sum / active;
}

}  // namespace dran
