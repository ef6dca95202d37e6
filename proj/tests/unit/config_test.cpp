#include <gtest/gtest.h>

#include <algorithm>

#include "dran/config.hpp"
#include "dran/errors.hpp"

using namespace dran;

TEST(Config, EmptyFileGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.sim.topology.rings, 2);
  EXPECT_EQ(c.sim.users_per_sector, 1);
  EXPECT_EQ(c.sim.topology.power.p_max_dbw, 15.2);
  EXPECT_EQ(c.agent_params.lambda, 0.9);
  EXPECT_EQ(c.agent_params.epsilon, 0.1);
  EXPECT_EQ(c.agent, AgentKind::kDqn);
  const auto topo = build_topology(c.sim.topology);
  EXPECT_EQ(topo.num_bs(), 19);
  EXPECT_EQ(topo.num_bs() * kSectorsPerBs * c.sim.users_per_sector, 57);
}

TEST(Config, CommentsAndWhitespace) {
  const auto c = parse_config("# header\n\n  rings = 1   # trailing\nagent=qlearning\n");
  EXPECT_EQ(c.sim.topology.rings, 1);
  EXPECT_EQ(c.agent, AgentKind::kQLearning);
}

TEST(Config, EpsilonOutOfRange) {
  try {
    parse_config("epsilon = 1.5\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "epsilon");
  }
}

TEST(Config, ParseErrorCarriesLine) {
  try {
    parse_config("rings = 1\n\nthis line has no equals sign\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_config("no_such_key = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("rings = two\n"), ConfigError);
}

TEST(Config, RepeatedKeyIsIdempotent) {
  const auto a = parse_config("seed = 42\n");
  const auto b = parse_config("seed = 42\nseed = 42\n");
  EXPECT_EQ(config_entries(a), config_entries(b));
  EXPECT_EQ(a.seed, 42u);
}

TEST(Config, EntriesRoundTrip) {
  auto c = parse_config(
      "rings = 0\nextra_sites = 500,0; 250,433.013\nuser_positions = 86.603,50; 361.436,80\n"
      "hidden_layers = 32,16\nactivation = tanh\nbackend = serial\nfull_buffer = true\n");
  std::string text;
  for (const auto& [k, v] : config_entries(c)) text += k + " = " + v + "\n";
  const auto back = parse_config(text);
  EXPECT_EQ(config_entries(back), config_entries(c));
  EXPECT_EQ(back.sim.topology.extra_sites.size(), 2u);
  EXPECT_EQ(back.sim.topology.extra_sites[1].o, back.sim.topology.bs_height_m);
  EXPECT_EQ(back.sim.fixed_users[0].o, back.sim.ue_height_m);
  EXPECT_EQ(back.agent_params.hidden, (std::vector<int>{32, 16}));
  EXPECT_EQ(back.agent_params.activation, Activation::kTanh);
  EXPECT_EQ(back.agent_params.backend, Backend::kSerial);
}

TEST(Config, EveryKeyIsListed) {
  const auto keys = config_keys();
  const auto entries = config_entries(parse_config(""));
  ASSERT_EQ(keys.size(), entries.size());
  for (std::size_t i = 0; i < keys.size(); ++i) EXPECT_EQ(keys[i], entries[i].first);
  for (const char* k : {"rings", "p_max_dbw", "discount", "epsilon", "iterations", "seed"}) {
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
  }
}

TEST(Config, SweepValues) {
  auto c = parse_config("sweep.epsilon = 0.05, 0.1, 0.2\n");
  ASSERT_EQ(c.sweep.size(), 1u);
  EXPECT_EQ(c.sweep[0].first, "epsilon");
  EXPECT_EQ(c.sweep[0].second.size(), 3u);
  EXPECT_THROW(parse_config("sweep.epsilon = 0.1, 4\n"), ValidationError);
  EXPECT_THROW(parse_config("sweep.bogus = 1\n"), ValidationError);
}

TEST(Config, CrossKeyValidation) {
  EXPECT_THROW(parse_config("p_max_dbw = 2\ndelta_p_max_db = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config("volume_lo_bits = 5e5\n"), ConfigError);
  EXPECT_THROW(parse_config("power_levels = 1\n"), ConfigError);
}
