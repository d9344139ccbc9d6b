#ifndef MOODCRL_NN_ADAM_HPP_
#define MOODCRL_NN_ADAM_HPP_

#include <cstdint>

#include "moodcrl/nn/param_store.hpp"

namespace moodcrl::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Coupled L2 penalty: weight_decay * w is added to the gradient.
  double weight_decay = 0.0;
};

struct AdamReport {
  bool applied = false;           // parameters were changed
  bool skipped_nonfinite = false; // gradient had NaN/Inf; store untouched
  bool zero_gradient = false;     // gradient was exactly zero; moments decayed only
  std::int64_t step = 0;
};

// One bias-corrected Adam step. A non-finite gradient leaves the store
// untouched. An exactly-zero gradient leaves parameters unchanged and only
// decays the moment estimates.
AdamReport adam_step(ParamStore& store, const GradStore& grads, const AdamConfig& config);

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_ADAM_HPP_
