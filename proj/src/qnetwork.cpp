#include "dran/qnetwork.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "dran/errors.hpp"

namespace dran {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the activation output h = f(z).
double activate_grad(Activation a, double h) {
  switch (a) {
    case Activation::kRelu:
      return h > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - h * h;
  }
  return 1.0;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw Error("checkpoint: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw Error("checkpoint: truncated parameters");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void QNetwork::Gradients::zero() {
  for (auto& w : weight) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

void QNetwork::Gradients::add(const Gradients& other) {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    for (std::size_t i = 0; i < weight[l].size(); ++i) weight[l][i] += other.weight[l][i];
    for (std::size_t i = 0; i < bias[l].size(); ++i) bias[l][i] += other.bias[l][i];
  }
}

QNetwork::QNetwork(std::vector<int> sizes, Activation activation, Role role)
    : activation_(activation), role_(role) {
  if (sizes.size() < 2) throw ArchitectureMismatch("network needs an input and an output size");
  for (int s : sizes) {
    if (s <= 0) throw ArchitectureMismatch("layer sizes must be positive");
  }
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    Layer l;
    l.in = sizes[i];
    l.out = sizes[i + 1];
    l.weight.assign(static_cast<std::size_t>(l.in) * l.out, 0.0);
    l.bias.assign(l.out, 0.0);
    layers_.push_back(std::move(l));
  }
}

QNetwork QNetwork::he_uniform(std::vector<int> sizes, Activation activation, RngStream& rng,
                              Role role) {
  QNetwork net(std::move(sizes), activation, role);
  for (auto& l : net.layers_) {
    const double limit = std::sqrt(6.0 / l.in);
    for (auto& w : l.weight) w = rng.uniform(-limit, limit);
  }
  return net;
}

std::vector<double> QNetwork::forward(std::span<const double> x) const {
  Workspace ws = make_workspace();
  forward(x, ws);
  return ws.act.back();
}

void QNetwork::forward(std::span<const double> x, Workspace& ws) const {
  ws.act[0].assign(x.begin(), x.end());
  const std::size_t last = layers_.size() - 1;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    const auto& in = ws.act[li];
    auto& out = ws.act[li + 1];
    for (int o = 0; o < l.out; ++o) {
      double z = l.bias[o];
      const double* w = &l.weight[static_cast<std::size_t>(o) * l.in];
      for (int i = 0; i < l.in; ++i) z += w[i] * in[i];
      out[o] = li == last ? z : activate(activation_, z);
    }
  }
}

double QNetwork::accumulate_gradient(std::span<const double> x, int action, double target,
                                     double scale, Gradients& grads, Workspace& ws) const {
  forward(x, ws);
  const std::size_t n = layers_.size();
  const double err = ws.act[n][action] - target;

  auto& top = ws.delta[n - 1];
  std::fill(top.begin(), top.end(), 0.0);
  top[action] = scale * err;

  for (std::size_t li = n; li-- > 0;) {
    const Layer& l = layers_[li];
    const auto& delta = ws.delta[li];
    const auto& in = ws.act[li];
    auto& gw = grads.weight[li];
    auto& gb = grads.bias[li];
    for (int o = 0; o < l.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* g = &gw[static_cast<std::size_t>(o) * l.in];
      for (int i = 0; i < l.in; ++i) g[i] += d * in[i];
    }
    if (li == 0) break;
    auto& below = ws.delta[li - 1];
    for (int i = 0; i < l.in; ++i) {
      double s = 0.0;
      for (int o = 0; o < l.out; ++o) s += l.weight[static_cast<std::size_t>(o) * l.in + i] * delta[o];
      below[i] = s * activate_grad(activation_, in[i]);
    }
  }
  return err * err;
}

QNetwork::Gradients QNetwork::zero_gradients() const {
  Gradients g;
  for (const auto& l : layers_) {
    g.weight.emplace_back(l.weight.size(), 0.0);
    g.bias.emplace_back(l.bias.size(), 0.0);
  }
  return g;
}

QNetwork::Workspace QNetwork::make_workspace() const {
  Workspace ws;
  ws.act.emplace_back(input_dim(), 0.0);
  for (const auto& l : layers_) {
    ws.act.emplace_back(l.out, 0.0);
    ws.delta.emplace_back(l.out, 0.0);
  }
  return ws;
}

void QNetwork::apply_gradients(const Gradients& grads, double lr) {
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    auto& l = layers_[li];
    for (std::size_t i = 0; i < l.weight.size(); ++i) l.weight[i] -= lr * grads.weight[li][i];
    for (std::size_t i = 0; i < l.bias.size(); ++i) l.bias[i] -= lr * grads.bias[li][i];
  }
}

std::size_t QNetwork::num_params() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

double& QNetwork::param(std::size_t index) {
  for (auto& l : layers_) {
    if (index < l.weight.size()) return l.weight[index];
    index -= l.weight.size();
    if (index < l.bias.size()) return l.bias[index];
    index -= l.bias.size();
  }
  throw std::out_of_range("QNetwork::param");
}

double QNetwork::param(std::size_t index) const {
  return const_cast<QNetwork*>(this)->param(index);
}

double QNetwork::grad_at(const Gradients& grads, std::size_t index) {
  for (std::size_t li = 0; li < grads.weight.size(); ++li) {
    if (index < grads.weight[li].size()) return grads.weight[li][index];
    index -= grads.weight[li].size();
    if (index < grads.bias[li].size()) return grads.bias[li][index];
    index -= grads.bias[li].size();
  }
  throw std::out_of_range("QNetwork::grad_at");
}

std::vector<int> QNetwork::sizes() const {
  std::vector<int> s;
  if (layers_.empty()) return s;
  s.push_back(layers_.front().in);
  for (const auto& l : layers_) s.push_back(l.out);
  return s;
}

bool QNetwork::same_architecture(const QNetwork& other) const { return sizes() == other.sizes(); }

void QNetwork::save(std::ostream& os) const {
  const auto s = sizes();
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  for (int v : s) put_u32(os, static_cast<std::uint32_t>(v));
  for (const auto& l : layers_) {
    for (double w : l.weight) put_f64(os, w);
    for (double b : l.bias) put_f64(os, b);
  }
}

QNetwork QNetwork::load(std::istream& is, Activation activation) {
  const std::uint32_t count = get_u32(is);
  if (count < 2 || count > 64) throw Error("checkpoint: implausible layer count");
  std::vector<int> sizes(count);
  for (auto& s : sizes) s = static_cast<int>(get_u32(is));
  QNetwork net(sizes, activation);
  for (auto& l : net.layers_) {
    for (double& w : l.weight) w = get_f64(is);
    for (double& b : l.bias) b = get_f64(is);
  }
  return net;
}

void QNetwork::save_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  save(os);
  if (!os) throw Error("failed writing " + path);
}

QNetwork QNetwork::load_file(const std::string& path, Activation activation) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return load(is, activation);
}

}  // namespace dran
