#pragma once

// Link-level physics: geometry, free-space style channel gain, link budget,
// SINR, Shannon rate, power/rate deltas and energy efficiency.
//
// Every function here is pure. Sums of received powers are always carried out
// in linear watts; decibel-watts only appear in the energy-efficiency
// denominator and in reporting.

#include <cmath>
#include <span>

#include "dran/errors.hpp"

namespace dran {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Gains are singular at zero distance; anything closer than this is rejected.
inline constexpr double kMinDistanceM = 1.0;

// Energy efficiency divides by a dBW value, which is singular at 0 dBW.
inline constexpr double kPowerGuardDbw = 1.0;

struct Position {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double o = 0.0;  // height, m
};

// Transmit power level in decibel-watts.
struct PowerDbw {
  double value = 0.0;

  constexpr PowerDbw() = default;
  constexpr explicit PowerDbw(double dbw) : value(dbw) {}
  friend constexpr auto operator<=>(const PowerDbw&, const PowerDbw&) = default;
};

// Dimensionless linear gain (transmit antenna * path loss * receive antenna).
struct ChannelGain {
  double value = 0.0;

  constexpr ChannelGain() = default;
  constexpr explicit ChannelGain(double linear) : value(linear) {}
};

struct LinkBudget {
  double serving_rsrp = 0.0;  // W
  double interference = 0.0;  // W, active interferers only
  double noise = 0.0;         // W
};

struct Interferer {
  bool active = false;
  PowerDbw power;
  ChannelGain gain;
};

struct PowerRateDelta {
  double delta_p_db = 0.0;   // P_max - P, dB
  double delta_c_bps = 0.0;  // C_max - C, positive means a rate loss
};

struct BsEfficiency {
  bool active = false;
  double ee = 0.0;  // Mbps/dBW
};

inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
inline double dbw_to_watts(PowerDbw p) { return dbw_to_watts(p.value); }

double watts_to_dbw(double watts);

double distance(const Position& a, const Position& b);

ChannelGain channel_gain(double tx_gain, double rx_gain, double fc_hz, double distance_m,
                         double exponent = 1.0);

LinkBudget link_budget(PowerDbw serving_power, ChannelGain serving_gain,
                       std::span<const Interferer> interferers, double noise_w);

double sinr(const LinkBudget& lb);

// Shannon rate in bit/s.
double data_rate(double bandwidth_hz, double sinr_linear);

PowerRateDelta power_and_rate_delta(bool active, PowerDbw p_now, PowerDbw p_max, double c_now_bps,
                                    double c_max_bps);

// Per-link energy efficiency in Mbps per dBW. Throws PowerGuardViolation when
// the power sits below kPowerGuardDbw.
double link_ee(double c_bps, PowerDbw p);

// Mean efficiency over the active BSs only. Throws NoActiveBs when none are.
double network_ee(std::span<const BsEfficiency> per_bs);

}  // namespace dran
