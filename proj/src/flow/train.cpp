#include "moodcrl/flow/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "moodcrl/errors.hpp"
#include "moodcrl/nn/adam.hpp"

namespace moodcrl::flow {

FlowTrainResult train_nll(CausalFlow& flow, const Matrix& x, const FlowTrainConfig& config,
                          const Vector& dequant_halfwidth) {
  require(!flow.frozen(), "train_nll: the flow is frozen");
  require(x.rows() == flow.dim(), "train_nll: data has the wrong dimension");
  require(x.cols() > 0, "train_nll: empty dataset");
  require(config.epochs >= 0, "train_nll: negative epoch count");
  require(config.batch_size > 0, "train_nll: batch size must be positive");
  require(config.lr > 0.0, "train_nll: learning rate must be positive");
  require(dequant_halfwidth.size() == 0 || dequant_halfwidth.size() == x.rows(),
          "train_nll: dequantization widths must match the data dimension");

  FlowTrainResult result;
  result.initial_nll = flow.nll(x);

  const nn::AdamConfig adam{.lr = config.lr, .weight_decay = config.weight_decay};
  Rng rng(config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Index> order(static_cast<std::size_t>(x.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  require(config.noise_std >= 0.0, "train_nll: noise std must be non-negative");
  Vector halfwidth = dequant_halfwidth.size() > 0 ? dequant_halfwidth : Vector::Zero(x.rows());
  const bool perturb = config.noise_std > 0.0 || (halfwidth.array() > 0.0).any();

  nn::ParamStore last_good = flow.params();
  nn::GradStore grads(flow.params());
  Matrix batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.resize(x.rows(), static_cast<Index>(stop - start));
      for (std::size_t k = start; k < stop; ++k) batch.col(static_cast<Index>(k - start)) = x.col(order[k]);
      if (perturb) {
        for (Index j = 0; j < batch.cols(); ++j) {
          for (Index i = 0; i < batch.rows(); ++i) {
            if (halfwidth[i] > 0.0) {
              batch(i, j) += halfwidth[i] * unit(rng);
            } else if (config.noise_std > 0.0) {
              batch(i, j) += config.noise_std * normal(rng);
            }
          }
        }
      }
      grads.set_zero();
      double loss = 0.0;
      try {
        loss = flow.nll_and_grad(batch, grads);
      } catch (const NumericError&) {
        loss = std::numeric_limits<double>::quiet_NaN();
      }
      if (!std::isfinite(loss) || !grads.all_finite()) {
        flow.params() = last_good;
        throw NumericError("train_nll: non-finite loss at epoch " + std::to_string(epoch) +
                           "; restored the last good parameters");
      }
      nn::adam_step(flow.params(), grads, adam);
      epoch_loss += loss * static_cast<double>(stop - start);
    }
    result.epoch_nll.push_back(epoch_loss / static_cast<double>(x.cols()));
    if (!flow.params().all_finite()) {
      flow.params() = last_good;
      throw NumericError("train_nll: parameters diverged at epoch " + std::to_string(epoch));
    }
    last_good = flow.params();
  }
  result.final_nll = flow.nll(x);
  return result;
}

}  // namespace moodcrl::flow
