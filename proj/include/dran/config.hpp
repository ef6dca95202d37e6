#pragma once

// Run configuration: flat "key = value" text, '#' starts a comment. Omitted
// keys keep their defaults. See README.md for the key list.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dran/agents.hpp"
#include "dran/simulator.hpp"

namespace dran {

struct RunConfig {
  SimConfig sim;
  AgentParams agent_params;
  AgentKind agent = AgentKind::kDqn;
  int episodes = 20000;  // T
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string init_weights;  // optional checkpoint for the DQN
  bool save_weights = false;
  // sweep.<key> = v1, v2, ... : values for the cartesian sweep
  std::vector<std::pair<std::string, std::vector<std::string>>> sweep;
};

// Sets one key from its textual value. Throws ValidationError naming the key.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Range checks across all keys. Throws ValidationError.
void validate(const RunConfig& cfg);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Every key with its current value, in documentation order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);
std::vector<std::string> config_keys();

}  // namespace dran
