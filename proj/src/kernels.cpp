#include "dran/kernels.hpp"

#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dran/errors.hpp"

namespace dran::kernels {

namespace {

// Below this many independent work items the parallel region costs more than it saves.
constexpr int kParallelThreshold = 64;

// SINR and rate of one link from precomputed per-BS watts. Same operation
// order as link_budget + sinr + data_rate, so results match bit for bit.
inline double link_rate_flat(const LinkSet& links, const double* power_w, int l) {
  const int b = links.link_bs[l];
  const double s = power_w[b] * links.serving_gain[l];
  const double* cross = &links.cross_gain[static_cast<std::size_t>(l) * links.num_bs];
  double interference = 0.0;
  for (int j = 0; j < links.num_bs; ++j) {
    if (cross[j] != 0.0) interference += power_w[j] * cross[j];
  }
  return links.bandwidth_hz * std::log2(1.0 + s / (interference + links.noise_w));
}

std::vector<int> active_bs(const LinkSet& links) {
  std::vector<int> out;
  for (int b = 0; b < links.num_bs; ++b) {
    if (links.bs_active[b]) out.push_back(b);
  }
  return out;
}

// Decodes candidate index into per-BS levels; the first active BS is the most
// significant digit, so index order equals lexicographic order.
void decode(std::uint64_t index, std::span<const int> active, int kappa, std::span<int> action) {
  for (std::size_t i = active.size(); i-- > 0;) {
    action[active[i]] = static_cast<int>(index % kappa);
    index /= kappa;
  }
}

constexpr std::uint64_t kOracleLimit = 1'000'000;

void check_search_space(const LinkSet& links, int kappa) {
  const auto n = search_space_size(links, kappa);
  if (n > kOracleLimit) {
    throw SearchSpaceTooLarge("oracle: " + std::to_string(n) + " joint actions exceed the 1e6 guard");
  }
}

}  // namespace

std::uint64_t search_space_size(const LinkSet& links, int kappa) {
  std::uint64_t n = 1;
  for (int b = 0; b < links.num_bs; ++b) {
    if (!links.bs_active[b]) continue;
    if (n > std::numeric_limits<std::uint64_t>::max() / kappa) return std::numeric_limits<std::uint64_t>::max();
    n *= static_cast<std::uint64_t>(kappa);
  }
  return n;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// ---------------------------------------------------------------- serial --

namespace serial {

void link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                std::span<double> rates_bps) {
  std::vector<Interferer> interferers;
  interferers.reserve(links.num_bs);
  for (int l = 0; l < links.num_links(); ++l) {
    const int b = links.link_bs[l];
    interferers.clear();
    for (int j = 0; j < links.num_bs; ++j) {
      if (j == b) continue;
      interferers.push_back({links.bs_active[j] != 0 && links.cross(l, j) != 0.0, power[j],
                             ChannelGain(links.cross(l, j))});
    }
    const auto lb = link_budget(power[b], ChannelGain(links.serving_gain[l]), interferers,
                                links.noise_w);
    rates_bps[l] = data_rate(links.bandwidth_hz, sinr(lb));
  }
}

void batch_link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                      std::span<double> rates_bps) {
  const std::size_t nb = links.num_bs;
  const std::size_t nl = links.num_links();
  const std::size_t n = nb == 0 ? 0 : power.size() / nb;
  for (std::size_t c = 0; c < n; ++c) {
    link_rates(links, power.subspan(c * nb, nb), rates_bps.subspan(c * nl, nl));
  }
}

OracleResult enumerate_oracle(const LinkSet& links, std::span<const PowerDbw> levels,
                              std::span<const double> c_max) {
  const int kappa = static_cast<int>(levels.size());
  check_search_space(links, kappa);
  const auto active = active_bs(links);
  OracleResult best;
  if (active.empty()) return best;

  const std::uint64_t total = search_space_size(links, kappa);
  std::vector<int> action(links.num_bs, -1);
  std::vector<PowerDbw> power(links.num_bs, levels.back());
  std::vector<double> rates(links.num_links());
  for (std::uint64_t i = 0; i < total; ++i) {
    decode(i, active, kappa, action);
    for (int b : active) power[b] = levels[action[b]];
    link_rates(links, power, rates);
    const auto r = summarize(links, rates, power, c_max);
    ++best.evaluated;
    if (r.feasible && (!best.found || r.network_ee > best.network_ee)) {
      best.found = true;
      best.network_ee = r.network_ee;
      best.action = action;
    }
  }
  return best;
}

double minibatch_gradient(const QNetwork& net, const BatchView& batch, QNetwork::Gradients& grads) {
  grads = net.zero_gradients();
  const int m = batch.size();
  if (m == 0) return 0.0;
  const int in = net.input_dim();
  auto ws = net.make_workspace();
  double sq = 0.0;
  for (int k = 0; k < m; ++k) {
    sq += net.accumulate_gradient(batch.features.subspan(static_cast<std::size_t>(k) * in, in),
                                  batch.actions[k], batch.targets[k], 1.0 / m, grads, ws);
  }
  return sq / (2.0 * m);
}

}  // namespace serial

// ------------------------------------------------------------------- omp --

namespace omp {

void link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                std::span<double> rates_bps) {
  std::vector<double> power_w(links.num_bs);
  for (int b = 0; b < links.num_bs; ++b) power_w[b] = dbw_to_watts(power[b]);
  const int nl = links.num_links();
#pragma omp parallel for schedule(static) if (nl >= kParallelThreshold)
  for (int l = 0; l < nl; ++l) rates_bps[l] = link_rate_flat(links, power_w.data(), l);
}

void batch_link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                      std::span<double> rates_bps) {
  const int nb = links.num_bs;
  const int nl = links.num_links();
  const int n = nb == 0 ? 0 : static_cast<int>(power.size()) / nb;
  std::vector<double> power_w(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) power_w[i] = dbw_to_watts(power[i]);
#pragma omp parallel for schedule(static) if (n * nl >= kParallelThreshold)
  for (int c = 0; c < n; ++c) {
    const double* pw = &power_w[static_cast<std::size_t>(c) * nb];
    double* out = &rates_bps[static_cast<std::size_t>(c) * nl];
    for (int l = 0; l < nl; ++l) out[l] = link_rate_flat(links, pw, l);
  }
}

OracleResult enumerate_oracle(const LinkSet& links, std::span<const PowerDbw> levels,
                              std::span<const double> c_max) {
  const int kappa = static_cast<int>(levels.size());
  check_search_space(links, kappa);
  const auto active = active_bs(links);
  OracleResult best;
  if (active.empty()) return best;

  const auto total = static_cast<std::int64_t>(search_space_size(links, kappa));
  std::vector<double> level_w(kappa);
  for (int k = 0; k < kappa; ++k) level_w[k] = dbw_to_watts(levels[k]);

  std::int64_t best_index = -1;
  double best_ee = 0.0;

#pragma omp parallel
  {
    std::vector<int> action(links.num_bs, -1);
    std::vector<PowerDbw> power(links.num_bs, levels.back());
    std::vector<double> power_w(links.num_bs, level_w.back());
    std::vector<double> rates(links.num_links());
    std::int64_t local_index = -1;
    double local_ee = 0.0;

#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < total; ++i) {
      decode(static_cast<std::uint64_t>(i), active, kappa, action);
      for (int b : active) {
        power[b] = levels[action[b]];
        power_w[b] = level_w[action[b]];
      }
      for (int l = 0; l < links.num_links(); ++l) rates[l] = link_rate_flat(links, power_w.data(), l);
      const auto r = summarize(links, rates, power, c_max);
      if (r.feasible && (local_index < 0 || r.network_ee > local_ee)) {
        local_index = i;
        local_ee = r.network_ee;
      }
    }

#pragma omp critical
    {
      if (local_index >= 0 &&
          (best_index < 0 || local_ee > best_ee || (local_ee == best_ee && local_index < best_index))) {
        best_index = local_index;
        best_ee = local_ee;
      }
    }
  }

  best.evaluated = static_cast<std::uint64_t>(total);
  if (best_index >= 0) {
    best.found = true;
    best.network_ee = best_ee;
    best.action.assign(links.num_bs, -1);
    decode(static_cast<std::uint64_t>(best_index), active, kappa, best.action);
  }
  return best;
}

double minibatch_gradient(const QNetwork& net, const BatchView& batch, QNetwork::Gradients& grads) {
  grads = net.zero_gradients();
  const int m = batch.size();
  if (m == 0) return 0.0;
  const int in = net.input_dim();
  std::vector<QNetwork::Gradients> partial(kGradientChunks, net.zero_gradients());
  std::vector<double> sq(kGradientChunks, 0.0);

#pragma omp parallel
  {
    auto ws = net.make_workspace();
#pragma omp for schedule(static)
    for (int c = 0; c < kGradientChunks; ++c) {
      const int lo = static_cast<int>(static_cast<std::int64_t>(m) * c / kGradientChunks);
      const int hi = static_cast<int>(static_cast<std::int64_t>(m) * (c + 1) / kGradientChunks);
      for (int k = lo; k < hi; ++k) {
        sq[c] += net.accumulate_gradient(batch.features.subspan(static_cast<std::size_t>(k) * in, in),
                                         batch.actions[k], batch.targets[k], 1.0 / m, partial[c], ws);
      }
    }
  }

  double total = 0.0;
  for (int c = 0; c < kGradientChunks; ++c) {
    grads.add(partial[c]);
    total += sq[c];
  }
  return total / (2.0 * m);
}

}  // namespace omp

}  // namespace dran::kernels
