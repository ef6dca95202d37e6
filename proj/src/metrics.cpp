#include "dran/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dran {

MetricsRow make_row(int t, const Observation& obs, const Decision& d, PowerDbw p_max,
                    bool n_star_counts) {
  MetricsRow r;
  r.t = t;
  r.p_max_dbw = p_max.value;
  r.phi = obs.links.bs_active;
  r.power_dbw.resize(obs.num_bs());
  for (int b = 0; b < obs.num_bs(); ++b) r.power_dbw[b] = d.power[b].value;
  r.rate_bps = d.result.bs_rate_bps;
  r.ee = d.result.bs_ee;
  r.zeta = d.zeta;
  r.n_star = d.n_star;
  r.n_star_counts = n_star_counts;
  return r;
}

std::optional<double> ee_reward(const MetricsRow& r) {
  double sum = 0.0;
  int n = 0;
  for (int b = 0; b < r.num_bs(); ++b) {
    if (!r.phi[b]) continue;
    sum += r.ee[b];
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

double ee_all_b(const MetricsRow& r) {
  double sum = 0.0;
  for (int b = 0; b < r.num_bs(); ++b) {
    if (r.phi[b]) sum += r.ee[b];
  }
  return sum / r.num_bs();
}

double throughput_avg_bps(const MetricsRow& r) {
  double sum = 0.0;
  for (int b = 0; b < r.num_bs(); ++b) {
    if (r.phi[b]) sum += r.rate_bps[b];
  }
  return sum / r.num_bs();
}

std::optional<double> power_avg_dbw(const MetricsRow& r) {
  // every BS active at one level: the mean is that level, skip the dB round trip
  const bool uniform = r.num_bs() > 0 &&
                       std::all_of(r.phi.begin(), r.phi.end(), [](auto p) { return p != 0; }) &&
                       std::all_of(r.power_dbw.begin(), r.power_dbw.end(),
                                   [&](double p) { return p == r.power_dbw.front(); });
  if (uniform) return r.power_dbw.front();
  double sum = 0.0;
  for (int b = 0; b < r.num_bs(); ++b) {
    if (r.phi[b]) sum += dbw_to_watts(r.power_dbw[b]);
  }
  if (!(sum > 0.0)) return std::nullopt;
  return 10.0 * std::log10(sum / r.num_bs());
}

namespace {

// sum_b phi_b (P_max - P_b) in watts
double linear_gap_sum(const MetricsRow& r) {
  const double top = dbw_to_watts(r.p_max_dbw);
  double sum = 0.0;
  for (int b = 0; b < r.num_bs(); ++b) {
    if (r.phi[b]) sum += top - dbw_to_watts(r.power_dbw[b]);
  }
  return sum;
}

std::optional<double> log_mean(double sum, int n) {
  if (!(sum > 0.0)) return std::nullopt;
  return 10.0 * std::log10(sum / n);
}

std::optional<double> diff(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

std::optional<double> zeta_value(const MetricsRow& r) {
  if (!r.zeta) return std::nullopt;
  return static_cast<double>(*r.zeta);
}

std::optional<double> n_star_value(const MetricsRow& r) {
  if (!r.n_star || !r.n_star_counts) return std::nullopt;
  return static_cast<double>(*r.n_star);
}

}  // namespace

std::optional<double> rsrp_decline_dbw(const MetricsRow& r) {
  return log_mean(linear_gap_sum(r), r.num_bs());
}

std::optional<double> itf_decline_dbw(const MetricsRow& r) {
  // every BS b collects the gaps of all b' != b
  const double total = linear_gap_sum(r);
  const double top = dbw_to_watts(r.p_max_dbw);
  double sum = 0.0;
  for (int b = 0; b < r.num_bs(); ++b) {
    const double own = r.phi[b] ? top - dbw_to_watts(r.power_dbw[b]) : 0.0;
    sum += total - own;
  }
  return log_mean(sum, r.num_bs());
}

CsvRow MetricsAccumulator::add(const MetricsRow& r) {
  ++episodes_;
  CsvRow c;
  c.t = r.t;
  c.ee_reward = ee_reward(r);
  reward_.add(c.ee_reward);
  c.ee_avg_all_b = ee_all_b(r);
  ee_.add(c.ee_avg_all_b);
  c.ee_cum = *ee_.value();
  thr_.add(throughput_avg_bps(r));
  c.thr_cum_bps = *thr_.value();
  c.pwr_avg_dbw = power_avg_dbw(r);
  pwr_.add(c.pwr_avg_dbw);
  c.pwr_cum_dbw = pwr_.value();
  rsrp_.add(rsrp_decline_dbw(r));
  itf_.add(itf_decline_dbw(r));
  c.rsrp_decl_dbw = rsrp_.value();
  c.itf_decl_dbw = itf_.value();
  c.decl_gap_dbw = diff(c.itf_decl_dbw, c.rsrp_decl_dbw);
  c.zeta = r.zeta;
  c.n_star = r.n_star;
  zeta_.add(zeta_value(r));
  iter_.add(n_star_value(r));
  c.success_cum = zeta_.value();
  c.iter_cum = iter_.value();
  return c;
}

// ---------------------------------------------------------------------------
// Batch path: every prefix mean is summed again from the first row.

namespace {

template <class F>
Series prefix_series(std::span<const MetricsRow> rows, F f) {
  Series s;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= t; ++k) sum += f(rows[k]);
    s.cumulative.push_back(sum / static_cast<double>(t + 1));
  }
  if (!s.cumulative.empty()) s.overall = s.cumulative.back();
  return s;
}

template <class F>
OptSeries prefix_opt_series(std::span<const MetricsRow> rows, F f) {
  OptSeries s;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t k = 0; k <= t; ++k) {
      if (const auto x = f(rows[k])) {
        sum += *x;
        ++n;
      }
    }
    s.cumulative.push_back(n > 0 ? std::optional<double>(sum / n) : std::nullopt);
  }
  if (!s.cumulative.empty()) s.overall = s.cumulative.back();
  return s;
}

}  // namespace

Series ee_averages(std::span<const MetricsRow> rows) { return prefix_series(rows, ee_all_b); }

ThroughputPower throughput_power_averages(std::span<const MetricsRow> rows) {
  ThroughputPower out;
  out.throughput = prefix_series(rows, throughput_avg_bps);
  for (const auto& r : rows) out.power.push_back(power_avg_dbw(r));
  out.power_cum = prefix_opt_series(rows, power_avg_dbw);
  return out;
}

Declines decline_averages(std::span<const MetricsRow> rows) {
  Declines out;
  out.rsrp = prefix_opt_series(rows, rsrp_decline_dbw);
  out.itf = prefix_opt_series(rows, itf_decline_dbw);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out.gap.push_back(diff(out.itf.cumulative[t], out.rsrp.cumulative[t]));
  }
  return out;
}

Complexity complexity_averages(std::span<const MetricsRow> rows) {
  return {prefix_opt_series(rows, zeta_value), prefix_opt_series(rows, n_star_value)};
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

void cell(std::ostream& os, std::optional<double> x) {
  os << ',';
  if (x) os << format_number(*x);
}

void cell(std::ostream& os, std::optional<int> x) {
  os << ',';
  if (x) os << *x;
}

}  // namespace

void write_csv_row(std::ostream& os, const CsvRow& r) {
  os << r.t;
  cell(os, r.ee_reward);
  cell(os, std::optional<double>(r.ee_avg_all_b));
  cell(os, std::optional<double>(r.ee_cum));
  cell(os, std::optional<double>(r.thr_cum_bps));
  cell(os, r.pwr_avg_dbw);
  cell(os, r.pwr_cum_dbw);
  cell(os, r.rsrp_decl_dbw);
  cell(os, r.itf_decl_dbw);
  cell(os, r.decl_gap_dbw);
  cell(os, r.zeta);
  cell(os, r.n_star);
  cell(os, r.success_cum);
  cell(os, r.iter_cum);
  os << '\n';
}

}  // namespace dran
