#ifndef MOODCRL_FLOW_CAUSAL_FLOW_HPP_
#define MOODCRL_FLOW_CAUSAL_FLOW_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/flow/masks.hpp"
#include "moodcrl/mdp/causal_graph.hpp"
#include "moodcrl/nn/dense.hpp"

namespace moodcrl::flow {

struct FlowConfig {
  int num_layers = 5;
  std::vector<Index> hidden{64, 64, 64};
  nn::Activation activation = nn::Activation::elu;
  double log_scale_bound = 7.0;
};

// Causal masked autoregressive flow F mapping tuple space to a standard
// normal base space. Each layer applies the affine transformer
//     z'_i = z_i * exp(log_scale_i) + shift_i
// where (shift_i, log_scale_i) come from a masked conditioner that only sees
// strict causal ancestors of i. log_scale = bound * tanh(raw / bound).
// All layers share the graph's topological ordering.
class CausalFlow {
 public:
  CausalFlow(mdp::CausalGraph graph, FlowConfig config, std::uint64_t seed);

  struct ForwardResult {
    Matrix u;        // d x B base-space points
    Vector log_det;  // log |det dF/dx| per sample
  };

  // Throws NumericError naming the layer when an intermediate goes non-finite.
  ForwardResult forward(const Matrix& x) const;

  // Layer-by-layer in reverse; within a layer, dimensions are solved in
  // topological order (grouped by causal depth, which is equivalent because
  // dimensions of equal depth never condition on each other).
  Matrix inverse(const Matrix& u) const;

  // log N(F(x); 0, I) + log |det dF/dx|.
  Vector log_prob(const Matrix& x) const;

  // Mean negative log-likelihood over the batch.
  double nll(const Matrix& x) const;

  // Mean NLL; accumulates its parameter gradient into `grads`.
  double nll_and_grad(const Matrix& x, nn::GradStore& grads) const;

  // u ~ N(0, I), returns inverse(u); deterministic per seed.
  Matrix sample(Index n, std::uint64_t seed) const;

  // Raw conditioner output (shift rows then log-scale rows) of one layer.
  void conditioner(std::size_t layer, const Matrix& z, Matrix& shift, Matrix& log_scale) const;

  Index dim() const { return graph_.dim(); }
  std::size_t num_layers() const { return conditioners_.size(); }
  const mdp::CausalGraph& graph() const { return graph_; }
  const FlowConfig& config() const { return config_; }
  const ConditionerMasks& masks() const { return masks_; }
  const nn::DenseStack& conditioner_net(std::size_t layer) const { return conditioners_.at(layer); }

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // A frozen flow refuses further NLL training.
  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

 private:
  double clamp_log_scale(double raw) const;

  mdp::CausalGraph graph_;
  FlowConfig config_;
  ConditionerMasks masks_;
  nn::ParamStore params_;
  std::vector<nn::DenseStack> conditioners_;
  std::vector<std::vector<Index>> levels_;  // dimensions grouped by causal depth
  bool frozen_ = false;
};

double standard_normal_log_density(const Matrix& u, Index col);

}  // namespace moodcrl::flow

#endif  // MOODCRL_FLOW_CAUSAL_FLOW_HPP_
