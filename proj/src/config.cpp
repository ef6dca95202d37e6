#include "dran/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "dran/errors.hpp"

namespace dran {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(begin, &end);
  if (v.empty() || end != begin + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ValidationError(key, "'" + v + "' is not a finite number");
  }
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(begin, &end, 10);
  if (v.empty() || end != begin + v.size() || errno == ERANGE) {
    throw ValidationError(key, "'" + v + "' is not an integer");
  }
  return x;
}

int to_int32(const std::string& key, const std::string& v) {
  const auto x = to_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ValidationError(key, "out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError(key, "'" + v + "' is not a boolean");
}

// "x,y; x,y; ..." (empty string = none)
std::vector<Position> to_positions(const std::string& key, const std::string& v) {
  std::vector<Position> out;
  if (v.empty()) return out;
  for (const auto& item : split(v, ';')) {
    if (item.empty()) continue;
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw ValidationError(key, "expected 'x,y' pairs separated by ';'");
    out.push_back({to_double(key, xy[0]), to_double(key, xy[1]), 0.0});
  }
  return out;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string positions_text(const std::vector<Position>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += "; ";
    s += num(ps[i].x) + "," + num(ps[i].y);
  }
  return s;
}

std::string backend_text(Backend b) { return b == Backend::kOmp ? "omp" : "serial"; }

struct KeyDef {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define DRAN_DOUBLE(NAME, FIELD)                                                  \
  KeyDef {                                                                        \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = to_double(NAME, v); }, \
        [](const RunConfig& c) { return num(c.FIELD); }                           \
  }
#define DRAN_INT(NAME, FIELD)                                                      \
  KeyDef {                                                                         \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = to_int32(NAME, v); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                 \
  }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      // topology
      DRAN_INT("rings", sim.topology.rings),
      DRAN_DOUBLE("isd_m", sim.topology.isd_m),
      DRAN_DOUBLE("bs_height_m", sim.topology.bs_height_m),
      DRAN_DOUBLE("ue_height_m", sim.ue_height_m),
      DRAN_DOUBLE("fc_hz", sim.topology.fc_hz),
      DRAN_DOUBLE("tx_gain_dbi", sim.topology.tx_gain_dbi),
      DRAN_DOUBLE("rx_gain_dbi", sim.topology.rx_gain_dbi),
      DRAN_DOUBLE("backlobe_db", sim.topology.backlobe_db),
      DRAN_DOUBLE("path_loss_exponent", sim.topology.path_loss_exponent),
      DRAN_INT("users_per_sector", sim.users_per_sector),
      {"extra_sites",
       [](RunConfig& c, const std::string& v) { c.sim.topology.extra_sites = to_positions("extra_sites", v); },
       [](const RunConfig& c) { return positions_text(c.sim.topology.extra_sites); }},
      {"user_positions",
       [](RunConfig& c, const std::string& v) { c.sim.fixed_users = to_positions("user_positions", v); },
       [](const RunConfig& c) { return positions_text(c.sim.fixed_users); }},
      DRAN_DOUBLE("mobility_speed_mps", sim.mobility.speed_mps),
      // power
      DRAN_DOUBLE("p_max_dbw", sim.topology.power.p_max_dbw),
      DRAN_DOUBLE("delta_p_max_db", sim.topology.power.delta_p_max_db),
      DRAN_INT("power_levels", sim.topology.power.levels),
      // radio and traffic
      DRAN_DOUBLE("bandwidth_hz", sim.bandwidth_hz),
      DRAN_DOUBLE("noise_dbw", sim.noise_dbw),
      DRAN_DOUBLE("arrival_prob", sim.traffic.arrival_prob),
      DRAN_DOUBLE("arrival_period", sim.traffic.modulation_period),
      DRAN_DOUBLE("volume_lo_bits", sim.traffic.volume_lo_bits),
      DRAN_DOUBLE("volume_hi_bits", sim.traffic.volume_hi_bits),
      {"full_buffer",
       [](RunConfig& c, const std::string& v) { c.sim.full_buffer = to_bool("full_buffer", v); },
       [](const RunConfig& c) { return std::string(c.sim.full_buffer ? "true" : "false"); }},
      // agent
      {"agent", [](RunConfig& c, const std::string& v) { c.agent = parse_agent(v); },
       [](const RunConfig& c) { return to_string(c.agent); }},
      DRAN_DOUBLE("discount", agent_params.lambda),
      DRAN_DOUBLE("epsilon", agent_params.epsilon),
      DRAN_DOUBLE("learning_rate", agent_params.learning_rate),
      DRAN_INT("iterations", agent_params.iterations),
      DRAN_INT("episodes", episodes),
      DRAN_INT("train_interval", agent_params.train_interval),
      DRAN_INT("replay_capacity", agent_params.replay_capacity),
      DRAN_INT("minibatch", agent_params.minibatch),
      DRAN_INT("target_sync", agent_params.target_sync),
      DRAN_INT("train_steps", agent_params.train_steps),
      {"hidden_layers",
       [](RunConfig& c, const std::string& v) {
         c.agent_params.hidden.clear();
         if (v.empty() || v == "none") return;
         for (const auto& h : split(v, ',')) c.agent_params.hidden.push_back(to_int32("hidden_layers", h));
       },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.agent_params.hidden.size(); ++i) {
           if (i) s += ",";
           s += std::to_string(c.agent_params.hidden[i]);
         }
         return s.empty() ? std::string("none") : s;
       }},
      {"activation",
       [](RunConfig& c, const std::string& v) {
         if (v == "relu") {
           c.agent_params.activation = Activation::kRelu;
         } else if (v == "tanh") {
           c.agent_params.activation = Activation::kTanh;
         } else {
           throw ValidationError("activation", "expected relu or tanh");
         }
       },
       [](const RunConfig& c) {
         return std::string(c.agent_params.activation == Activation::kRelu ? "relu" : "tanh");
       }},
      DRAN_DOUBLE("q_alpha", agent_params.q_alpha),
      DRAN_INT("q_bins", agent_params.q_bins),
      {"backend",
       [](RunConfig& c, const std::string& v) {
         if (v == "omp") {
           c.agent_params.backend = Backend::kOmp;
         } else if (v == "serial") {
           c.agent_params.backend = Backend::kSerial;
         } else {
           throw ValidationError("backend", "expected omp or serial");
         }
       },
       [](const RunConfig& c) { return backend_text(c.agent_params.backend); }},
      // run
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const auto x = to_int("seed", v);
         if (x < 0) throw ValidationError("seed", "must be non-negative");
         c.seed = static_cast<std::uint64_t>(x);
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir; }},
      {"init_weights", [](RunConfig& c, const std::string& v) { c.init_weights = v; },
       [](const RunConfig& c) { return c.init_weights; }},
      {"save_weights",
       [](RunConfig& c, const std::string& v) { c.save_weights = to_bool("save_weights", v); },
       [](const RunConfig& c) { return std::string(c.save_weights ? "true" : "false"); }},
  };
  return table;
}

#undef DRAN_DOUBLE
#undef DRAN_INT

const KeyDef* find_key(const std::string& key) {
  for (const auto& k : key_table()) {
    if (key == k.name) return &k;
  }
  return nullptr;
}

void require(bool ok, const char* key, const std::string& msg) {
  if (!ok) throw ValidationError(key, msg);
}

void finalize(RunConfig& cfg) {
  for (auto& p : cfg.sim.topology.extra_sites) p.o = cfg.sim.topology.bs_height_m;
  for (auto& p : cfg.sim.fixed_users) p.o = cfg.sim.ue_height_m;
  cfg.agent_params.scales.volume_bits = cfg.sim.traffic.volume_hi_bits;
  cfg.agent_params.scales.rsrp_floor_dbw = cfg.sim.noise_dbw;
  cfg.agent_params.scales.rsrp_span_db = -cfg.sim.noise_dbw;
}

}  // namespace

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (!find_key(target)) throw ValidationError(key, "unknown key '" + target + "' in sweep");
    std::vector<std::string> values;
    for (const auto& v : split(value, ',')) {
      if (!v.empty()) values.push_back(v);
    }
    if (values.empty()) throw ValidationError(key, "sweep needs at least one value");
    // validate each value on a scratch copy
    for (const auto& v : values) {
      RunConfig scratch = cfg;
      find_key(target)->set(scratch, v);
      // range errors on other keys may be transient while a file is parsed
      try {
        validate(scratch);
      } catch (const ValidationError& e) {
        if (e.key() == target) throw ValidationError(key, "value '" + v + "': " + e.what());
      }
    }
    auto it = std::find_if(cfg.sweep.begin(), cfg.sweep.end(),
                           [&](const auto& e) { return e.first == target; });
    if (it == cfg.sweep.end()) {
      cfg.sweep.emplace_back(target, std::move(values));
    } else {
      it->second = std::move(values);
    }
    return;
  }
  const KeyDef* def = find_key(key);
  if (!def) throw ValidationError(key, "unknown key");
  def->set(cfg, value);
  finalize(cfg);
}

void validate(const RunConfig& c) {
  const auto& t = c.sim.topology;
  require(t.rings >= 0 && t.rings <= 20, "rings", "must be in [0, 20]");
  require(t.isd_m > 2 * kMinUserDistanceM, "isd_m", "must exceed 20 m");
  require(t.bs_height_m >= 0.0, "bs_height_m", "must be >= 0");
  require(c.sim.ue_height_m >= 0.0, "ue_height_m", "must be >= 0");
  require(t.fc_hz > 0.0, "fc_hz", "must be positive");
  require(t.backlobe_db >= 0.0, "backlobe_db", "must be >= 0");
  require(t.path_loss_exponent > 0.0, "path_loss_exponent", "must be positive");
  require(c.sim.users_per_sector >= 1, "users_per_sector", "must be >= 1");
  require(c.sim.mobility.speed_mps >= 0.0, "mobility_speed_mps", "must be >= 0");
  require(t.power.levels >= 2, "power_levels", "kappa must be >= 2");
  require(t.power.delta_p_max_db > 0.0, "delta_p_max_db", "must be positive");
  require(t.power.p_max_dbw - t.power.delta_p_max_db >= kPowerGuardDbw, "delta_p_max_db",
          "lowest power level falls below the 1 dBW guard");
  require(c.sim.bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
  require(c.sim.noise_dbw < 0.0, "noise_dbw", "must be negative (it also sets the RSRP scale)");
  require(c.sim.traffic.arrival_prob >= 0.0 && c.sim.traffic.arrival_prob <= 1.0, "arrival_prob",
          "must be in [0, 1]");
  require(c.sim.traffic.modulation_period >= 0.0, "arrival_period", "must be >= 0");
  require(c.sim.traffic.volume_lo_bits > 0.0, "volume_lo_bits", "must be positive");
  require(c.sim.traffic.volume_hi_bits >= c.sim.traffic.volume_lo_bits, "volume_hi_bits",
          "must be >= volume_lo_bits");

  const auto& a = c.agent_params;
  require(a.lambda > 0.0 && a.lambda <= 1.0, "discount", "must be in (0, 1]");
  require(a.epsilon >= 0.0 && a.epsilon <= 1.0, "epsilon", "must be in [0, 1]");
  require(a.learning_rate > 0.0, "learning_rate", "must be positive");
  require(a.iterations >= 1, "iterations", "must be >= 1");
  require(c.episodes >= 1, "episodes", "must be >= 1");
  require(a.train_interval >= 1, "train_interval", "must be >= 1");
  require(a.replay_capacity >= 1, "replay_capacity", "must be >= 1");
  require(a.minibatch >= 1, "minibatch", "must be >= 1");
  require(a.target_sync >= 1, "target_sync", "must be >= 1");
  require(a.train_steps >= 1, "train_steps", "must be >= 1");
  for (int h : a.hidden) require(h >= 1, "hidden_layers", "widths must be >= 1");
  require(a.q_alpha > 0.0 && a.q_alpha <= 1.0, "q_alpha", "must be in (0, 1]");
  require(a.q_bins >= 1, "q_bins", "must be >= 1");
  require(!c.out_dir.empty(), "out_dir", "must not be empty");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  finalize(cfg);
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(lineno, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "missing key before '='");
    set_key(cfg, key, trim(line.substr(eq + 1)));
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidConfig("cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : key_table()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.emplace_back(k.name);
  return out;
}

}  // namespace dran
