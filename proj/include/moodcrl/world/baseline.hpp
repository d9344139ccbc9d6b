#ifndef MOODCRL_WORLD_BASELINE_HPP_
#define MOODCRL_WORLD_BASELINE_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/mdp/dataset.hpp"
#include "moodcrl/nn/dense.hpp"

namespace moodcrl::world {

struct BaselineConfig {
  std::vector<Index> hidden{512, 512, 512, 512};
  nn::Activation activation = nn::Activation::leaky_relu;
  int epochs = 1000;
  Index batch_size = 256;
  double lr = 1e-4;
  double weight_decay = 1e-5;
  std::uint64_t seed = 0;
};

// Plain regression net (s, a) -> (s', r) working on normalized tuples.
class BaselineDynamicsNet {
 public:
  BaselineDynamicsNet(const mdp::TupleLayout& layout, const BaselineConfig& config);

  const mdp::TupleLayout& layout() const { return layout_; }

  // Input: normalized (s, a) rows; output: normalized (s', r) rows.
  Matrix forward(const Matrix& inputs) const;

  // Mean over the batch of the squared error norm.
  double l2_loss(const Matrix& inputs, const Matrix& targets) const;
  double l2_loss_and_grad(const Matrix& inputs, const Matrix& targets, nn::GradStore& grads) const;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const BaselineConfig& config() const { return config_; }

 private:
  mdp::TupleLayout layout_;
  BaselineConfig config_;
  nn::ParamStore params_;
  nn::DenseStack net_;
};

struct BaselineTrainResult {
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;
  double final_loss = 0.0;
};

// x_normalized is the d x N normalized tuple matrix.
BaselineTrainResult train_baseline(BaselineDynamicsNet& net, const Matrix& x_normalized);

struct BaselinePrediction {
  Matrix next_state;  // raw units
  Vector reward;
};

BaselinePrediction predict_baseline(const BaselineDynamicsNet& net,
                                    const mdp::Normalizer& normalizer, const Matrix& states,
                                    const Matrix& actions);

}  // namespace moodcrl::world

#endif  // MOODCRL_WORLD_BASELINE_HPP_
