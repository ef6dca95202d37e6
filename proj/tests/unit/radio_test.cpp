#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dran/errors.hpp"
#include "dran/radio.hpp"

using namespace dran;

namespace {

// Reference values evaluated independently in Python (float64).
constexpr double kDistanceExample = 102.72414516558412;   // (0,0,25) to (100,0,1.5)
constexpr double kGainOneGhzOneMetre = 0.02385672579618471;  // c / (4 pi 1e9)
constexpr double kRate3162 = 116272044.80216044;          // 1e7 log2(1 + 1e-9 / 10^-12.5)
constexpr double kPmaxWatts = 33.11311214825911;          // 10^1.52

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::abs(want)) << got << " vs " << want;
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_EQ(distance({0, 0, 0}, {0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(distance({0, 0, 0}, {3, 4, 0}), 5.0);
  expect_rel(distance({0, 0, 25}, {100, 0, 1.5}), kDistanceExample, 1e-14);
}

TEST(ChannelGain, OneGigahertzOneMetre) {
  expect_rel(channel_gain(1, 1, 1e9, 1.0).value, kGainOneGhzOneMetre, 1e-12);
}

TEST(ChannelGain, ExponentAndAntennaGainsScale) {
  const double base = channel_gain(1, 1, 2.6e9, 200.0).value;
  expect_rel(channel_gain(1, 1, 2.6e9, 200.0, 2.0).value, base * base, 1e-12);
  expect_rel(channel_gain(50, 2, 2.6e9, 200.0).value, 100 * base, 1e-12);
}

TEST(ChannelGain, DecreasesWithDistance) {
  double prev = channel_gain(1, 1, 2.6e9, 1.0).value;
  for (double d = 2.0; d < 2000.0; d *= 1.7) {
    const double g = channel_gain(1, 1, 2.6e9, d).value;
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(ChannelGain, RejectsSubMetreDistance) {
  EXPECT_THROW(channel_gain(1, 1, 1e9, 0.5), DistanceTooSmall);
}

TEST(LinkBudget, ServingOnly) {
  const double noise = std::pow(10.0, -12.5);
  const auto lb = link_budget(PowerDbw(10), ChannelGain(1e-10), {}, noise);
  expect_rel(lb.serving_rsrp, 1e-9, 1e-12);
  EXPECT_EQ(lb.interference, 0.0);
  expect_rel(sinr(lb), 3162.2776601683795, 1e-9);
}

TEST(LinkBudget, SleepingInterfererIsMasked) {
  const std::vector<Interferer> itf{{false, PowerDbw(15.2), ChannelGain(1e-8)}};
  const auto with = link_budget(PowerDbw(10), ChannelGain(1e-10), itf, 1e-13);
  const auto without = link_budget(PowerDbw(10), ChannelGain(1e-10), {}, 1e-13);
  EXPECT_EQ(with.interference, without.interference);
}

TEST(LinkBudget, IdenticalInterferersAdd) {
  const Interferer one{true, PowerDbw(12), ChannelGain(3e-11)};
  const std::vector<Interferer> a{one};
  const std::vector<Interferer> b{one, one};
  const double i1 = link_budget(PowerDbw(10), ChannelGain(1e-10), a, 1e-13).interference;
  const double i2 = link_budget(PowerDbw(10), ChannelGain(1e-10), b, 1e-13).interference;
  expect_rel(i2, 2 * i1, 1e-15);
}

TEST(Sinr, ServingEqualsNoiseGivesOne) {
  EXPECT_DOUBLE_EQ(sinr({1e-12, 0.0, 1e-12}), 1.0);
}

TEST(Sinr, MonotoneDecreasingInInterference) {
  double prev = sinr({1e-9, 0.0, 1e-13});
  for (double i = 1e-14; i < 1e3; i *= 10) {
    const double s = sinr({1e-9, i, 1e-13});
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    prev = s;
  }
  EXPECT_LT(prev, 1e-11);
}

TEST(DataRate, Examples) {
  EXPECT_EQ(data_rate(10e6, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(data_rate(10e6, 1.0), 10e6);
  const double s = 1e-9 / std::pow(10.0, -12.5);
  expect_rel(data_rate(10e6, s), kRate3162, 1e-12);
}

TEST(PowerRateDelta, Examples) {
  const auto sleep = power_and_rate_delta(false, PowerDbw(13.2), PowerDbw(15.2), 1e6, 2e6);
  EXPECT_EQ(sleep.delta_p_db, 0.0);
  EXPECT_EQ(sleep.delta_c_bps, 0.0);
  EXPECT_EQ(power_and_rate_delta(true, PowerDbw(15.2), PowerDbw(15.2), 1, 1).delta_p_db, 0.0);
  const auto d = power_and_rate_delta(true, PowerDbw(13.2), PowerDbw(15.2), 1e6, 3e6);
  EXPECT_NEAR(d.delta_p_db, 2.0, 1e-12);
  EXPECT_EQ(d.delta_c_bps, 2e6);
}

TEST(LinkEe, Examples) {
  EXPECT_NEAR(link_ee(116.27e6, PowerDbw(10)), 11.627, 1e-12);
  EXPECT_EQ(link_ee(0.0, PowerDbw(10)), 0.0);
  EXPECT_THROW(link_ee(1e6, PowerDbw(0.5)), PowerGuardViolation);
}

TEST(NetworkEe, MeanOverActiveOnly) {
  const std::vector<BsEfficiency> one{{true, 7.5}};
  EXPECT_EQ(network_ee(one), 7.5);
  const std::vector<BsEfficiency> two{{true, 4}, {true, 6}};
  EXPECT_EQ(network_ee(two), 5.0);
  const std::vector<BsEfficiency> masked{{true, 4}, {false, 6}};
  EXPECT_EQ(network_ee(masked), 4.0);
  const std::vector<BsEfficiency> none{{false, 4}};
  EXPECT_THROW(network_ee(none), NoActiveBs);
}

TEST(Units, SpotValues) {
  EXPECT_EQ(dbw_to_watts(0.0), 1.0);
  EXPECT_NEAR(watts_to_dbw(10.0), 10.0, 1e-15);
  expect_rel(dbw_to_watts(15.2), kPmaxWatts, 1e-14);
  EXPECT_THROW(watts_to_dbw(0.0), NonPositivePower);
  EXPECT_THROW(watts_to_dbw(-1.0), NonPositivePower);
}

TEST(Units, RoundTripOverRange) {
  for (double dbw = -200.0; dbw <= 200.0; dbw += 0.37) {
    const double back = watts_to_dbw(dbw_to_watts(dbw));
    EXPECT_LE(std::abs(back - dbw), 1e-12 * std::max(1.0, std::abs(dbw))) << dbw;
    const double w = dbw_to_watts(dbw);
    expect_rel(dbw_to_watts(watts_to_dbw(w)), w, 1e-12);
  }
}
