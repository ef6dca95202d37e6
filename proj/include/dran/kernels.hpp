#pragma once

// Hot loops, each in two flavours:
//
//   kernels::serial  reference implementations, written against the public
//                    radio API one link at a time. Kept for testing.
//   kernels::omp     flat-array OpenMP versions used by the simulator.
//
// Rate and search kernels return bit-identical results in both flavours. The
// gradient kernel reduces over a fixed number of chunks, so it is
// deterministic for any thread count but differs from the sequential
// reference in the last few ulps.

#include <cstdint>
#include <span>
#include <vector>

#include "dran/links.hpp"
#include "dran/qnetwork.hpp"

namespace dran::kernels {

struct OracleResult {
  std::vector<int> action;  // level index per BS, -1 for sleeping BSs
  double network_ee = 0.0;
  bool found = false;
  std::uint64_t evaluated = 0;
};

// Minibatch view for the gradient kernels: row k of features is the state of
// sample k, actions[k] the output head trained, targets[k] its TD target.
struct BatchView {
  std::span<const double> features;  // batch x input_dim
  std::span<const int> actions;
  std::span<const double> targets;
  int size() const { return static_cast<int>(actions.size()); }
};

inline constexpr int kGradientChunks = 16;

namespace serial {

void link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                std::span<double> rates_bps);

// power is n x num_bs row-major, rates n x num_links.
void batch_link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                      std::span<double> rates_bps);

OracleResult enumerate_oracle(const LinkSet& links, std::span<const PowerDbw> levels,
                              std::span<const double> c_max);

// Fills grads (same shape as net) and returns the loss
// 1/(2m) sum_k (Q(s_k)[a_k] - y_k)^2.
double minibatch_gradient(const QNetwork& net, const BatchView& batch, QNetwork::Gradients& grads);

}  // namespace serial

namespace omp {

void link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                std::span<double> rates_bps);

void batch_link_rates(const LinkSet& links, std::span<const PowerDbw> power,
                      std::span<double> rates_bps);

OracleResult enumerate_oracle(const LinkSet& links, std::span<const PowerDbw> levels,
                              std::span<const double> c_max);

double minibatch_gradient(const QNetwork& net, const BatchView& batch, QNetwork::Gradients& grads);

}  // namespace omp

// Number of joint assignments of the active BSs, saturating at UINT64_MAX.
std::uint64_t search_space_size(const LinkSet& links, int kappa);

int max_threads();

}  // namespace dran::kernels
