#pragma once

// Per-episode statistics and their running means.
//
// Undefined values (log of a zero mean, EE with every BS asleep) are carried
// as empty optionals, written as empty CSV cells and skipped by the running
// means, which average over the defined entries only.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dran/agents.hpp"

namespace dran {

struct MetricsRow {
  int t = 0;
  double p_max_dbw = 15.2;
  std::vector<std::uint8_t> phi;
  std::vector<double> power_dbw;
  std::vector<double> rate_bps;
  std::vector<double> ee;  // Mbps/dBW per BS, 0 for sleepers
  std::optional<int> zeta;
  std::optional<int> n_star;
  bool n_star_counts = true;  // false for the sleep scheme

  int num_bs() const { return static_cast<int>(phi.size()); }
};

MetricsRow make_row(int t, const Observation& obs, const Decision& d, PowerDbw p_max,
                    bool n_star_counts);

// Per-episode quantities.
std::optional<double> ee_reward(const MetricsRow& r);        // mean over active BSs
double ee_all_b(const MetricsRow& r);                        // sum over active BSs / B
double throughput_avg_bps(const MetricsRow& r);              // sum of rates / B
std::optional<double> power_avg_dbw(const MetricsRow& r);    // 10 log10 of mean watts, sleepers 0 W
std::optional<double> rsrp_decline_dbw(const MetricsRow& r);
std::optional<double> itf_decline_dbw(const MetricsRow& r);

// Running mean over defined samples.
class RunningMean {
 public:
  void add(std::optional<double> x) {
    if (!x) return;
    sum_ += *x;
    ++n_;
  }
  std::optional<double> value() const {
    if (n_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(n_);
  }
  long count() const { return n_; }

 private:
  double sum_ = 0.0;
  long n_ = 0;
};

// One CSV line.
struct CsvRow {
  int t = 0;
  std::optional<double> ee_reward;
  double ee_avg_all_b = 0.0;
  double ee_cum = 0.0;
  double thr_cum_bps = 0.0;
  std::optional<double> pwr_avg_dbw;
  std::optional<double> pwr_cum_dbw;
  std::optional<double> rsrp_decl_dbw;  // cumulative
  std::optional<double> itf_decl_dbw;   // cumulative
  std::optional<double> decl_gap_dbw;
  std::optional<int> zeta;
  std::optional<int> n_star;
  std::optional<double> success_cum;
  std::optional<double> iter_cum;
};

class MetricsAccumulator {
 public:
  CsvRow add(const MetricsRow& r);

  long episodes() const { return episodes_; }
  double ee_overall() const { return ee_.value().value_or(0.0); }
  double throughput_overall_bps() const { return thr_.value().value_or(0.0); }
  std::optional<double> power_overall_dbw() const { return pwr_.value(); }
  std::optional<double> success_overall() const { return zeta_.value(); }
  std::optional<double> iterations_overall() const { return iter_.value(); }
  std::optional<double> ee_reward_overall() const { return reward_.value(); }
  std::optional<double> rsrp_decline_overall() const { return rsrp_.value(); }
  std::optional<double> itf_decline_overall() const { return itf_.value(); }

 private:
  long episodes_ = 0;
  RunningMean ee_, thr_, pwr_, rsrp_, itf_, zeta_, iter_, reward_;
};

// Batch recomputation from scratch, used to cross-check the streaming path.
struct Series {
  double overall = 0.0;
  std::vector<double> cumulative;
};
struct OptSeries {
  std::optional<double> overall;
  std::vector<std::optional<double>> cumulative;
};

Series ee_averages(std::span<const MetricsRow> rows);
struct ThroughputPower {
  Series throughput;
  std::vector<std::optional<double>> power;  // per episode
  OptSeries power_cum;
};
ThroughputPower throughput_power_averages(std::span<const MetricsRow> rows);
struct Declines {
  OptSeries rsrp;
  OptSeries itf;
  std::vector<std::optional<double>> gap;
};
Declines decline_averages(std::span<const MetricsRow> rows);
struct Complexity {
  OptSeries success;
  OptSeries iterations;
};
Complexity complexity_averages(std::span<const MetricsRow> rows);

// CSV with the fixed column order below; empty cell = undefined.
inline constexpr const char* kCsvHeader =
    "t,ee_reward,ee_avg_allB,ee_cum,thr_cum_bps,pwr_avg_dbw,pwr_cum_dbw,rsrp_decl_dbw,"
    "itf_decl_dbw,decl_gap_dbw,zeta,n_star,success_cum,iter_cum";

std::string format_number(double x);
void write_csv_row(std::ostream& os, const CsvRow& r);

}  // namespace dran
