#ifndef MOODCRL_WORLD_MAPPER_HPP_
#define MOODCRL_WORLD_MAPPER_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/flow/causal_flow.hpp"
#include "moodcrl/mdp/dataset.hpp"
#include "moodcrl/nn/dense.hpp"

namespace moodcrl::world {

struct MapperConfig {
  std::vector<Index> hidden{512, 512, 512, 512};
  nn::Activation activation = nn::Activation::leaky_relu;
  int epochs = 1000;
  Index batch_size = 256;
  double lr = 1e-4;
  double weight_decay = 1e-5;
  std::uint64_t seed = 0;
};

// Base-space map G(u~) = W u~ + mlp(u~) with a learnable linear skip W that
// starts at the identity and an MLP whose last layer starts at zero, so an
// untrained mapper is the identity.
class MapperNet {
 public:
  MapperNet(Index dim, const MapperConfig& config);

  Index dim() const { return dim_; }
  Matrix forward(const Matrix& u_perturbed) const;

  // Mean over the batch of ||u - G(u~)||_1.
  double l1_loss(const Matrix& u_perturbed, const Matrix& u_true) const;
  // Same loss; accumulates its (sub)gradient, using sign(0) = 0.
  double l1_loss_and_grad(const Matrix& u_perturbed, const Matrix& u_true,
                          nn::GradStore& grads) const;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const MapperConfig& config() const { return config_; }

 private:
  Index dim_;
  MapperConfig config_;
  nn::ParamStore params_;
  nn::ParamId skip_;
  nn::DenseStack net_;
};

// Raw perturbed tuples (s, a, s, 0), one column per query.
Matrix build_perturbed_raw(const Matrix& states, const Matrix& actions,
                           const mdp::TupleLayout& layout);
Vector build_perturbed_raw(const Vector& state, const Vector& action,
                           const mdp::TupleLayout& layout);
// Same, normalized with the frozen training statistics.
Matrix build_perturbed(const Matrix& states, const Matrix& actions,
                       const mdp::TupleLayout& layout, const mdp::Normalizer& normalizer);

// Normalized perturbed counterparts of every tuple in a normalized data matrix.
Matrix perturb_normalized(const Matrix& x_normalized, const mdp::TupleLayout& layout,
                          const mdp::Normalizer& normalizer);

struct MapperTrainResult {
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;
  double final_loss = 0.0;
};

// Fits G on the base pairs U = F(x), U~ = F(x~) computed once with the frozen
// flow. Both data matrices are normalized, d x N, column-aligned.
MapperTrainResult train_mapper(MapperNet& mapper, const flow::CausalFlow& flow,
                               const Matrix& x_normalized, const Matrix& x_perturbed_normalized);

}  // namespace moodcrl::world

#endif  // MOODCRL_WORLD_MAPPER_HPP_
