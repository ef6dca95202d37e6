// dran: command-line front end.
//
//   dran run     --config run.cfg [--seed S] [--out DIR] [--quiet]
//   dran compare --config run.cfg ...
//   dran sweep   --config run.cfg --param key=v1,v2 ... [--workers W]
//   dran oracle  --config small.cfg ...
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dran/errors.hpp"
#include "dran/runner.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "flat key = value config file (defaults when omitted)");
  app->add_option("--seed", c.seed, "override the config seed");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--quiet", c.quiet, "suppress progress output");
  app->add_option("--set", c.sets, "override one key: key=value (repeatable)");
}

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw dran::ParseError(0, "expected key=value, got '" + s + "'");
  auto trim = [](std::string x) {
    const auto b = x.find_first_not_of(' ');
    const auto e = x.find_last_not_of(' ');
    return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
  };
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

dran::RunConfig resolve(const Common& c) {
  dran::RunConfig cfg = c.config.empty() ? dran::parse_config("") : dran::load_config(c.config);
  for (const auto& s : c.sets) {
    const auto [k, v] = split_assignment(s);
    dran::set_key(cfg, k, v);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  dran::validate(cfg);
  return cfg;
}

dran::RunOptions options(const Common& c) {
  dran::RunOptions o;
  o.quiet = c.quiet;
  o.log = &std::cerr;
  return o;
}

void print_summary(const dran::RunSummary& s) {
  auto opt = [](std::optional<double> x) { return x ? dran::format_number(*x) : std::string("-"); };
  std::printf("%-10s ee_overall %-14s throughput_bps %-14s power_dbw %-10s success %-8s iterations %s\n",
              dran::to_string(s.agent).c_str(), dran::format_number(s.ee_overall).c_str(),
              dran::format_number(s.throughput_overall_bps).c_str(), opt(s.power_overall_dbw).c_str(),
              opt(s.success_overall).c_str(), opt(s.iterations_overall).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense-RAN downlink power management simulator"};
  app.require_subcommand(1);

  Common run_c, cmp_c, sweep_c, oracle_c;
  auto* run = app.add_subcommand("run", "single run of the configured agent");
  add_common(run, run_c);
  auto* cmp = app.add_subcommand("compare", "dqn, qlearning and sleep on the same seed");
  add_common(cmp, cmp_c);
  auto* sweep = app.add_subcommand("sweep", "cartesian product over listed keys");
  add_common(sweep, sweep_c);
  std::vector<std::string> params;
  int workers = 0;
  sweep->add_option("--param", params, "key=v1,v2,... (repeatable, adds to sweep.* keys)");
  sweep->add_option("--workers", workers, "parallel runs (0 = hardware threads)");
  auto* oracle = app.add_subcommand("oracle", "exhaustive search on a small instance");
  add_common(oracle, oracle_c);
  std::optional<int> oracle_steps;
  oracle->add_option("--episodes", oracle_steps, "slots to evaluate (defaults to the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const auto cfg = resolve(run_c);
      print_summary(dran::run_experiment(cfg, options(run_c)).summary);
    } else if (cmp->parsed()) {
      const auto cfg = resolve(cmp_c);
      for (const auto& s : dran::run_compare(cfg, options(cmp_c))) print_summary(s);
    } else if (sweep->parsed()) {
      auto cfg = resolve(sweep_c);
      for (const auto& p : params) {
        const auto [k, v] = split_assignment(p);
        dran::set_key(cfg, "sweep." + k, v);
      }
      if (cfg.sweep.empty()) throw dran::ValidationError("sweep", "no sweep keys given");
      for (const auto& s : dran::run_sweep(cfg, workers, options(sweep_c))) print_summary(s);
    } else if (oracle->parsed()) {
      auto cfg = resolve(oracle_c);
      if (oracle_steps) {
        if (*oracle_steps < 1) throw dran::ValidationError("episodes", "must be >= 1");
        cfg.episodes = *oracle_steps;
      }
      const auto steps = dran::run_oracle(cfg, options(oracle_c));
      int found = 0;
      for (const auto& s : steps) found += s.oracle_ee ? 1 : 0;
      std::printf("oracle: %zu slots, %d with an active BS set, results in %s/oracle.csv\n",
                  steps.size(), found, cfg.out_dir.c_str());
    }
  } catch (const dran::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
