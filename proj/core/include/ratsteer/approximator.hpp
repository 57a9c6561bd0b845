#pragma once
// Feedforward value-function approximator with main and target weight sets,
// squared-TD-error loss and plain SGD. Shared by the HRL controller, the HRL
// meta-controller and the flat DQN baseline.

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

namespace ratsteer {

struct Transition {
  std::vector<double> state;
  int choice = 0;  // action or goal index
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t batch_size)
      : capacity_(capacity), batch_size_(batch_size) {}

  void push(Transition t);
  std::size_t size() const { return buf_.size(); }
  std::size_t batch_size() const { return batch_size_; }
  bool ready() const { return buf_.size() >= batch_size_; }

  // uniform sample without replacement within one batch
  std::vector<Transition> sample(std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t batch_size_;
  std::size_t next_ = 0;  // ring cursor
  std::vector<Transition> buf_;
};

// ReLU hidden layers, linear output, one output per action/goal.
class ValueNet {
 public:
  // layer_sizes: input, hidden..., output
  ValueNet(std::vector<int> layer_sizes, double learning_rate, double discount,
           std::uint64_t seed);

  std::vector<double> forward(std::span<const double> input, bool use_target = false) const;

  // One SGD step on the mean squared TD error of the batch; returns the loss
  // before the step. Targets come from the target weights.
  double td_update(std::span<const Transition> batch);

  // TD loss of a batch without updating.
  double td_loss(std::span<const Transition> batch) const;

  // Flat gradient of the TD loss at the current main weights.
  std::vector<double> td_gradient(std::span<const Transition> batch) const;

  void sync_target();  // hard copy of the main weights

  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> p);
  std::size_t num_params() const;

  double discount() const { return gamma_; }
  double learning_rate() const { return alpha_; }
  const std::vector<int>& layer_sizes() const { return sizes_; }

  void save(const std::filesystem::path& file) const;
  static ValueNet load(const std::filesystem::path& file);

 private:
  struct Layer {
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;
  };
  struct Workspace;

  std::vector<double> run(const std::vector<Layer>& layers,
                          std::span<const double> input) const;
  // forward pass keeping activations, then backprop of dL/dq on one output
  void accumulate_gradient(const Transition& t, double inv_batch,
                           std::vector<Layer>& grad) const;

  std::vector<int> sizes_;
  double alpha_;
  double gamma_;
  std::vector<Layer> main_;
  std::vector<Layer> target_;
};

}  // namespace ratsteer
