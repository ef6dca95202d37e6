#pragma once

// Fully connected Q-network (a small back-propagation MLP) mapping a state
// feature vector to one Q-value per power level.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dran/rng.hpp"

namespace dran {

enum class Activation { kRelu, kTanh };

class QNetwork {
 public:
  enum class Role { kPredicted, kTarget };

  struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> weight;  // out x in, row-major
    std::vector<double> bias;    // out
  };

  struct Gradients {
    std::vector<std::vector<double>> weight;
    std::vector<std::vector<double>> bias;
    void zero();
    void add(const Gradients& other);
  };

  // Scratch buffers for one forward/backward pass.
  struct Workspace {
    std::vector<std::vector<double>> act;    // act[0] = input, act[i+1] = output of layer i
    std::vector<std::vector<double>> delta;  // per layer
  };

  QNetwork() = default;

  // All parameters zero. sizes = {input, hidden..., output}, at least two entries.
  QNetwork(std::vector<int> sizes, Activation activation, Role role = Role::kPredicted);

  // He-uniform weights drawn from rng, zero biases.
  static QNetwork he_uniform(std::vector<int> sizes, Activation activation, RngStream& rng,
                             Role role = Role::kPredicted);

  std::vector<double> forward(std::span<const double> x) const;
  void forward(std::span<const double> x, Workspace& ws) const;

  // Adds scale * d/dW [ 0.5 (Q(x)[action] - target)^2 ] to grads and returns
  // the squared error. Uses (and overwrites) ws.
  double accumulate_gradient(std::span<const double> x, int action, double target, double scale,
                             Gradients& grads, Workspace& ws) const;

  Gradients zero_gradients() const;
  Workspace make_workspace() const;

  // Plain gradient descent: theta -= lr * grad.
  void apply_gradients(const Gradients& grads, double lr);

  std::size_t num_params() const;
  // Flat view used by finite-difference checks: layer by layer, weights then biases.
  double& param(std::size_t index);
  double param(std::size_t index) const;
  static double grad_at(const Gradients& grads, std::size_t index);

  std::vector<int> sizes() const;
  bool same_architecture(const QNetwork& other) const;
  int input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  Activation activation() const { return activation_; }
  Role role() const { return role_; }
  void set_role(Role r) { role_ = r; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  // Weight checkpoint: little-endian uint32 count of layer sizes, the sizes as
  // uint32, then every parameter as a little-endian IEEE-754 double in param()
  // order.
  void save(std::ostream& os) const;
  static QNetwork load(std::istream& is, Activation activation = Activation::kRelu);
  void save_file(const std::string& path) const;
  static QNetwork load_file(const std::string& path, Activation activation = Activation::kRelu);

 private:
  std::vector<Layer> layers_;
  Activation activation_ = Activation::kRelu;
  Role role_ = Role::kPredicted;
};

}  // namespace dran
