#ifndef MOODCRL_NN_DENSE_HPP_
#define MOODCRL_NN_DENSE_HPP_

#include <string_view>
#include <vector>

#include "moodcrl/nn/activation.hpp"
#include "moodcrl/nn/param_store.hpp"

namespace moodcrl::nn {

// One affine layer. An empty mask means fully connected; otherwise the mask
// is out_dim x in_dim with entries in {0, 1} and the layer uses weight * mask.
struct MaskedLinearSpec {
  Index in_dim = 0;
  Index out_dim = 0;
  Matrix mask;
  Activation activation = Activation::identity;
};

struct LinearParams {
  ParamId weight;
  ParamId bias;
};

// Single-sample evaluation of one layer: act((W .* M) x + b).
Vector dense_forward(const Matrix& weight, const Vector& bias,
                     const MaskedLinearSpec& spec, const Vector& input);

enum class FinalInit { glorot, zeros };

// Intermediates of one forward pass, needed by DenseStack::backward.
struct DenseTape {
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> pre;     // pre-activation of each layer
  std::vector<Matrix> post;    // output of each layer
  const void* owner = nullptr;

  bool recorded() const { return owner != nullptr; }
};

// A chain of masked dense layers whose parameters live in a ParamStore.
// Inputs and outputs are feature-major batches (one column per sample).
class DenseStack {
 public:
  DenseStack() = default;

  // Registers "<prefix>.<layer>.weight" / ".bias" in the store. Weights are
  // Glorot-uniform, biases zero; the final layer is zeroed when requested.
  DenseStack(ParamStore& store, std::string_view prefix,
             std::vector<MaskedLinearSpec> specs, Rng& rng,
             FinalInit final_init = FinalInit::glorot);

  // Convenience: dense layers in -> hidden... -> out.
  static std::vector<MaskedLinearSpec> mlp_specs(Index in_dim,
                                                 const std::vector<Index>& hidden,
                                                 Index out_dim, Activation hidden_act,
                                                 Activation out_act = Activation::identity);

  Matrix forward(const ParamStore& store, const Matrix& input) const;
  Matrix forward(const ParamStore& store, const Matrix& input, DenseTape& tape) const;

  // Accumulates parameter gradients of a scalar loss into `grads` given the
  // loss cotangent of the output, and returns the cotangent of the input.
  Matrix backward(const ParamStore& store, const DenseTape& tape,
                  const Matrix& d_output, GradStore& grads) const;

  Index in_dim() const { return specs_.empty() ? 0 : specs_.front().in_dim; }
  Index out_dim() const { return specs_.empty() ? 0 : specs_.back().out_dim; }
  std::size_t num_layers() const { return specs_.size(); }
  const std::vector<MaskedLinearSpec>& specs() const { return specs_; }
  const std::vector<LinearParams>& params() const { return params_; }

  Matrix effective_weight(const ParamStore& store, std::size_t layer) const;

 private:
  std::vector<MaskedLinearSpec> specs_;
  std::vector<LinearParams> params_;
};

Matrix glorot_uniform(Index rows, Index cols, Rng& rng);

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_DENSE_HPP_
