#include "dran/runner.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dran/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace dran {

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

ojson opt(std::optional<double> x) { return x ? ojson(*x) : ojson(nullptr); }

std::string opt_cell(std::optional<double> x) { return x ? format_number(*x) : std::string(); }

}  // namespace

RunOutput run_experiment(const RunConfig& cfg, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  Simulator sim(cfg.sim, cfg.seed);
  const auto& topo = sim.topology();
  auto agent = make_agent(cfg.agent, cfg.agent_params, topo.power_levels, cfg.seed);
  if (!cfg.init_weights.empty() && cfg.agent == AgentKind::kDqn) {
    auto net = QNetwork::load_file(cfg.init_weights, cfg.agent_params.activation);
    static_cast<DqnAgent&>(*agent).set_weights(net);
  }
  const bool counts = cfg.agent != AgentKind::kSleep;

  RunOutput out;
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  MetricsAccumulator acc;
  const int report_every = std::max(1, cfg.episodes / 10);

  for (int t = 0; t < cfg.episodes; ++t) {
    if (opt.hooks.before) opt.hooks.before(t, *agent);
    const Observation obs = sim.observe();
    const Decision d = agent->act(obs, t == cfg.episodes - 1);
    if (d.zeta && *d.zeta == 1 && !(d.result.sum_delta_c_bps >= 0.0)) {
      throw InvariantViolation("accepted action at t=" + std::to_string(t) +
                               " violates the rate constraint");
    }
    if (opt.hooks.after) opt.hooks.after(t, obs, d, *agent);
    const auto row = make_row(t, obs, d, topo.p_max(), counts);
    write_csv_row(csv, acc.add(row));
    if (opt.keep_rows) out.rows.push_back(row);
    sim.step(obs, d.power, d.link_rate_bps);
    if (!opt.quiet && opt.log && (t + 1) % report_every == 0) {
      *opt.log << to_string(cfg.agent) << " seed " << cfg.seed << ": episode " << (t + 1) << "/"
               << cfg.episodes << "  ee_cum " << format_number(acc.ee_overall()) << '\n';
    }
  }

  auto& s = out.summary;
  s.agent = cfg.agent;
  s.seed = cfg.seed;
  s.episodes = cfg.episodes;
  s.num_bs = topo.num_bs();
  s.num_users = static_cast<int>(sim.users().size());
  s.ee_overall = acc.ee_overall();
  s.ee_reward_mean = acc.ee_reward_overall();
  s.throughput_overall_bps = acc.throughput_overall_bps();
  s.power_overall_dbw = acc.power_overall_dbw();
  s.rsrp_decline_overall_dbw = acc.rsrp_decline_overall();
  s.itf_decline_overall_dbw = acc.itf_decline_overall();
  s.success_overall = acc.success_overall();
  s.iterations_overall = acc.iterations_overall();
  if (const auto* dqn = dynamic_cast<const DqnAgent*>(agent.get())) s.training_rounds = dqn->training_rounds();
  s.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.csv = csv.str();

  if (opt.write_files) {
    const fs::path dir(cfg.out_dir);
    ensure_dir(dir);
    write_text(dir / "metrics.csv", out.csv);
    write_text(dir / "summary.json", summary_json(s, cfg));
    if (cfg.save_weights) {
      if (const auto* dqn = dynamic_cast<const DqnAgent*>(agent.get())) {
        dqn->predicted().save_file((dir / "weights.bin").string());
      }
    }
  }
  return out;
}

std::string summary_json(const RunSummary& s, const RunConfig& cfg) {
  ojson j;
  j["agent"] = to_string(s.agent);
  j["seed"] = s.seed;
  j["episodes"] = s.episodes;
  j["num_bs"] = s.num_bs;
  j["num_users"] = s.num_users;
  j["ee_overall"] = s.ee_overall;
  j["ee_reward_mean"] = opt(s.ee_reward_mean);
  j["throughput_overall_bps"] = s.throughput_overall_bps;
  j["power_overall_dbw"] = opt(s.power_overall_dbw);
  j["rsrp_decline_overall_dbw"] = opt(s.rsrp_decline_overall_dbw);
  j["itf_decline_overall_dbw"] = opt(s.itf_decline_overall_dbw);
  j["success_overall"] = opt(s.success_overall);
  j["iterations_overall"] = opt(s.iterations_overall);
  j["training_rounds"] = s.training_rounds;
  j["wall_clock_s"] = s.wall_clock_s;
  ojson c;
  for (const auto& [k, v] : config_entries(cfg)) c[k] = v;
  j["config"] = c;
  return j.dump(2) + "\n";
}

namespace {

const char* kSummaryColumns =
    "ee_overall,ee_reward_mean,thr_overall_bps,pwr_overall_dbw,rsrp_decl_dbw,itf_decl_dbw,"
    "success_overall,iterations_overall,wall_clock_s";

std::string summary_cells(const RunSummary& s) {
  return format_number(s.ee_overall) + "," + opt_cell(s.ee_reward_mean) + "," +
         format_number(s.throughput_overall_bps) + "," + opt_cell(s.power_overall_dbw) + "," +
         opt_cell(s.rsrp_decline_overall_dbw) + "," + opt_cell(s.itf_decline_overall_dbw) + "," +
         opt_cell(s.success_overall) + "," + opt_cell(s.iterations_overall) + "," +
         format_number(s.wall_clock_s);
}

}  // namespace

std::vector<RunSummary> run_compare(const RunConfig& cfg, const RunOptions& opt) {
  std::vector<RunSummary> out;
  for (auto kind : {AgentKind::kDqn, AgentKind::kQLearning, AgentKind::kSleep}) {
    RunConfig c = cfg;
    c.agent = kind;
    c.out_dir = (fs::path(cfg.out_dir) / to_string(kind)).string();
    out.push_back(run_experiment(c, opt).summary);
  }
  if (opt.write_files) {
    const double sleep_ee = out.back().ee_overall;
    std::ostringstream os;
    os << "agent," << kSummaryColumns << ",ee_gain_vs_sleep_pct\n";
    for (const auto& s : out) {
      os << to_string(s.agent) << ',' << summary_cells(s) << ',';
      if (sleep_ee > 0.0) os << format_number(100.0 * (s.ee_overall / sleep_ee - 1.0));
      os << '\n';
    }
    ensure_dir(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "comparison.csv", os.str());
  }
  return out;
}

std::vector<RunSummary> run_sweep(const RunConfig& cfg, int workers, const RunOptions& opt) {
  // expand the grid, last key fastest
  std::vector<RunConfig> grid{cfg};
  std::vector<std::vector<std::string>> labels{{}};
  for (const auto& [key, values] : cfg.sweep) {
    std::vector<RunConfig> next;
    std::vector<std::vector<std::string>> next_labels;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (const auto& v : values) {
        RunConfig c = grid[i];
        set_key(c, key, v);
        next.push_back(std::move(c));
        auto l = labels[i];
        l.push_back(v);
        next_labels.push_back(std::move(l));
      }
    }
    grid = std::move(next);
    labels = std::move(next_labels);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i].sweep.clear();
    validate(grid[i]);
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    grid[i].out_dir = (fs::path(cfg.out_dir) / name).string();
  }

  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(grid.size()));

  std::vector<RunSummary> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  RunOptions inner = opt;
  inner.log = nullptr;
  std::mutex log_mu;
  auto worker = [&] {
#ifdef _OPENMP
    // each run stays single-threaded; parallelism comes from the pool
    omp_set_num_threads(1);
#endif
    for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) {
      try {
        out[i] = run_experiment(grid[i], inner).summary;
        if (!opt.quiet && opt.log) {
          std::lock_guard lk(log_mu);
          *opt.log << "sweep run " << i + 1 << "/" << grid.size() << " done\n";
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (opt.write_files) {
    std::ostringstream os;
    os << "run";
    for (const auto& [key, values] : cfg.sweep) os << ',' << key;
    os << ",agent,seed," << kSummaryColumns << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << i;
      for (const auto& l : labels[i]) os << ',' << l;
      os << ',' << to_string(out[i].agent) << ',' << out[i].seed << ',' << summary_cells(out[i]) << '\n';
    }
    ensure_dir(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "sweep.csv", os.str());
  }
  return out;
}

std::vector<OracleStep> run_oracle(const RunConfig& cfg, const RunOptions& opt) {
  Simulator sim(cfg.sim, cfg.seed);
  const auto& levels = sim.topology().power_levels;
  std::vector<OracleStep> out;
  std::ostringstream csv;
  csv << "t,active_bs,evaluated,oracle_ee,reference_ee,action\n";
  for (int t = 0; t < cfg.episodes; ++t) {
    const Observation obs = sim.observe();
    OracleStep st;
    st.t = t;
    st.active = static_cast<int>(obs.active.size());
    std::vector<int> action(obs.num_bs(), static_cast<int>(levels.size()) - 1);
    if (!obs.all_sleep()) {
      const auto o = exhaustive_oracle(obs, levels, cfg.agent_params.backend);
      st.evaluated = o.evaluated;
      st.reference_ee = evaluate_action(obs, levels, action).result.network_ee;
      if (o.found) {
        st.oracle_ee = o.network_ee;
        action = o.action;
      }
    }
    const auto d = evaluate_action(obs, levels, action);
    for (int b = 0; b < obs.num_bs(); ++b) st.action.push_back(obs.links.bs_active[b] ? action[b] : -1);
    csv << t << ',' << st.active << ',' << st.evaluated << ',' << opt_cell(st.oracle_ee) << ','
        << opt_cell(st.reference_ee) << ',';
    for (std::size_t b = 0; b < st.action.size(); ++b) csv << (b ? " " : "") << st.action[b];
    csv << '\n';
    sim.step(obs, d.power, d.link_rate_bps);
    out.push_back(std::move(st));
  }
  if (opt.write_files) {
    ensure_dir(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "oracle.csv", csv.str());
  }
  return out;
}

}  // namespace dran
