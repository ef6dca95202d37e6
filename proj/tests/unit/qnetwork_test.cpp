#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "dran/errors.hpp"
#include "dran/qnetwork.hpp"
#include "dran/rl.hpp"

using namespace dran;

namespace {

// Plain dot-product forward pass, written without the library's layer loop.
std::vector<double> hand_forward(const QNetwork& net, std::vector<double> x) {
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& L = layers[i];
    std::vector<double> y(L.out);
    for (int o = 0; o < L.out; ++o) {
      long double acc = L.bias[o];
      for (int k = 0; k < L.in; ++k) acc += static_cast<long double>(L.weight[o * L.in + k]) * x[k];
      double v = static_cast<double>(acc);
      if (i + 1 < layers.size()) v = net.activation() == Activation::kRelu ? std::max(0.0, v) : std::tanh(v);
      y[o] = v;
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace

TEST(QNetwork, ZeroNetworkGivesZeros) {
  QNetwork net({2, 64, 64, 5}, Activation::kRelu);
  for (double q : net.forward(std::vector<double>{0.3, 0.7})) EXPECT_EQ(q, 0.0);
}

TEST(QNetwork, BiasOnlyOutput) {
  QNetwork net({2, 3}, Activation::kRelu);
  net.layers()[0].bias = {1.5, -2.0, 0.25};
  for (double s : {0.0, 0.5, 1.0}) {
    const auto q = net.forward(std::vector<double>{s, 1 - s});
    EXPECT_EQ(q, (std::vector<double>{1.5, -2.0, 0.25}));
  }
}

TEST(QNetwork, MatchesHandRolledForward) {
  RngStream rng(1, 200);
  for (auto act : {Activation::kRelu, Activation::kTanh}) {
    auto net = QNetwork::he_uniform({2, 64, 64, 5}, act, rng);
    for (auto& L : net.layers()) {
      for (auto& b : L.bias) b = rng.uniform(-0.1, 0.1);
    }
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x{rng.uniform(), rng.uniform()};
      const auto got = net.forward(x);
      const auto want = hand_forward(net, x);
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_LE(std::abs(got[i] - want[i]), 1e-12 * std::max(1e-3, std::abs(want[i])));
      }
    }
  }
}

TEST(QNetwork, HeUniformBounds) {
  RngStream rng(2, 200);
  const auto net = QNetwork::he_uniform({2, 64, 64, 5}, Activation::kRelu, rng);
  for (const auto& L : net.layers()) {
    const double bound = std::sqrt(6.0 / L.in);
    for (double w : L.weight) EXPECT_LE(std::abs(w), bound);
    for (double b : L.bias) EXPECT_EQ(b, 0.0);
  }
  EXPECT_EQ(net.num_params(), 2u * 64 + 64 + 64 * 64 + 64 + 64 * 5 + 5);
}

TEST(QNetwork, SameSeedSameWeights) {
  RngStream a(3, 200), b(3, 200);
  const auto x = QNetwork::he_uniform({2, 16, 4}, Activation::kRelu, a);
  const auto y = QNetwork::he_uniform({2, 16, 4}, Activation::kRelu, b);
  for (std::size_t i = 0; i < x.num_params(); ++i) EXPECT_EQ(x.param(i), y.param(i));
}

TEST(QNetwork, CheckpointRoundTripIsBitExact) {
  RngStream rng(4, 200);
  auto net = QNetwork::he_uniform({2, 7, 5, 3}, Activation::kRelu, rng);
  net.layers()[1].bias[2] = -0.125;
  std::stringstream ss;
  net.save(ss);
  const auto back = QNetwork::load(ss);
  ASSERT_EQ(back.sizes(), net.sizes());
  for (std::size_t i = 0; i < net.num_params(); ++i) EXPECT_EQ(back.param(i), net.param(i));
}

TEST(QNetwork, TruncatedCheckpointThrows) {
  RngStream rng(5, 200);
  const auto net = QNetwork::he_uniform({2, 4, 3}, Activation::kRelu, rng);
  std::stringstream ss;
  net.save(ss);
  const std::string full = ss.str();
  std::stringstream cut(full.substr(0, full.size() - 5));
  EXPECT_ANY_THROW(QNetwork::load(cut));
}

TEST(QNetwork, ApplyGradientsWithZeroRateIsNoop) {
  RngStream rng(6, 200);
  auto net = QNetwork::he_uniform({2, 8, 3}, Activation::kRelu, rng);
  const auto before = net;
  auto g = net.zero_gradients();
  for (auto& w : g.weight) std::fill(w.begin(), w.end(), 1.0);
  net.apply_gradients(g, 0.0);
  for (std::size_t i = 0; i < net.num_params(); ++i) EXPECT_EQ(net.param(i), before.param(i));
  net.apply_gradients(net.zero_gradients(), 0.5);
  for (std::size_t i = 0; i < net.num_params(); ++i) EXPECT_EQ(net.param(i), before.param(i));
}

TEST(QNetwork, SyncTargetCopiesAndChecksShape) {
  RngStream rng(7, 200);
  const auto p = QNetwork::he_uniform({2, 8, 3}, Activation::kRelu, rng);
  QNetwork t({2, 8, 3}, Activation::kRelu, QNetwork::Role::kTarget);
  sync_target(p, t);
  for (std::size_t i = 0; i < p.num_params(); ++i) EXPECT_EQ(t.param(i), p.param(i));
  EXPECT_EQ(t.role(), QNetwork::Role::kTarget);
  QNetwork wrong({2, 9, 3}, Activation::kRelu);
  EXPECT_THROW(sync_target(p, wrong), ArchitectureMismatch);
}
