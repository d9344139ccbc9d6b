#ifndef MOODCRL_FLOW_TRAIN_HPP_
#define MOODCRL_FLOW_TRAIN_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/flow/causal_flow.hpp"

namespace moodcrl::flow {

struct FlowTrainConfig {
  int epochs = 2000;
  Index batch_size = 256;
  double lr = 1e-4;
  double weight_decay = 1e-5;
  // Std of Gaussian jitter (normalized units) added to rows without
  // dequantization noise; 0 disables it.
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

struct FlowTrainResult {
  double initial_nll = 0.0;       // mean NLL on the (clean) data before training
  std::vector<double> epoch_nll;  // mean mini-batch NLL of every epoch
  double final_nll = 0.0;         // mean NLL on the (clean) data after training
};

// Adam minimization of the mean NLL over shuffled mini-batches. `x` is d x N
// and already normalized. Rows listed in `dequant_halfwidth` with a positive
// value receive fresh U(-w, w) noise every epoch; the other rows receive
// N(0, noise_std^2) jitter when noise_std > 0.
//
// On a non-finite loss the last good parameters are restored and
// NumericError is thrown. Training a frozen flow is a ValidationError.
FlowTrainResult train_nll(CausalFlow& flow, const Matrix& x, const FlowTrainConfig& config,
                          const Vector& dequant_halfwidth = {});

}  // namespace moodcrl::flow

#endif  // MOODCRL_FLOW_TRAIN_HPP_
