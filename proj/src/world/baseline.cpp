#include "moodcrl/world/baseline.hpp"

#include <cmath>
#include <string>

#include "../batching.hpp"
#include "moodcrl/errors.hpp"
#include "moodcrl/nn/adam.hpp"

namespace moodcrl::world {

BaselineDynamicsNet::BaselineDynamicsNet(const mdp::TupleLayout& layout,
                                         const BaselineConfig& config)
    : layout_(layout), config_(config) {
  Rng rng(config.seed);
  const Index in = layout.state_dim() + layout.action_dim();
  const Index out = layout.state_dim() + 1;
  net_ = nn::DenseStack(params_, "baseline",
                        nn::DenseStack::mlp_specs(in, config.hidden, out, config.activation), rng);
}

Matrix BaselineDynamicsNet::forward(const Matrix& inputs) const {
  require(inputs.rows() == net_.in_dim(), "baseline: input has the wrong dimension");
  return net_.forward(params_, inputs);
}

double BaselineDynamicsNet::l2_loss(const Matrix& inputs, const Matrix& targets) const {
  require(targets.rows() == net_.out_dim() && targets.cols() == inputs.cols() && inputs.cols() > 0,
          "baseline loss: shape mismatch");
  return (forward(inputs) - targets).squaredNorm() / static_cast<double>(inputs.cols());
}

double BaselineDynamicsNet::l2_loss_and_grad(const Matrix& inputs, const Matrix& targets,
                                             nn::GradStore& grads) const {
  require(inputs.rows() == net_.in_dim() && targets.rows() == net_.out_dim() &&
              targets.cols() == inputs.cols() && inputs.cols() > 0,
          "baseline loss: shape mismatch");
  nn::DenseTape tape;
  const Matrix diff = net_.forward(params_, inputs, tape) - targets;
  const double inv_b = 1.0 / static_cast<double>(inputs.cols());
  net_.backward(params_, tape, 2.0 * inv_b * diff, grads);
  return diff.squaredNorm() * inv_b;
}

BaselineTrainResult train_baseline(BaselineDynamicsNet& net, const Matrix& x_normalized) {
  const auto& layout = net.layout();
  require(x_normalized.rows() == layout.dim() && x_normalized.cols() > 0,
          "train_baseline: data shape mismatch");
  const BaselineConfig& cfg = net.config();
  require(cfg.epochs >= 0 && cfg.batch_size > 0 && cfg.lr > 0.0,
          "train_baseline: invalid optimizer settings");
  const Index n_in = layout.state_dim() + layout.action_dim();
  const Matrix inputs = x_normalized.topRows(n_in);
  const Matrix targets = x_normalized.bottomRows(layout.state_dim() + 1);

  BaselineTrainResult result;
  result.initial_loss = net.l2_loss(inputs, targets);
  const nn::AdamConfig adam{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  Rng rng(cfg.seed ^ 0x2545f4914f6cdd1dULL);
  auto order = detail::iota_indices(inputs.cols());
  nn::GradStore grads(net.params());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double total = 0.0;
    detail::for_each_minibatch(order, cfg.batch_size, rng, [&](std::size_t b, std::size_t e) {
      grads.set_zero();
      const double loss = net.l2_loss_and_grad(detail::gather_columns(inputs, order, b, e),
                                               detail::gather_columns(targets, order, b, e), grads);
      if (!std::isfinite(loss)) {
        throw NumericError("train_baseline: non-finite loss at epoch " + std::to_string(epoch));
      }
      nn::adam_step(net.params(), grads, adam);
      total += loss * static_cast<double>(e - b);
    });
    result.epoch_loss.push_back(total / static_cast<double>(inputs.cols()));
  }
  result.final_loss = net.l2_loss(inputs, targets);
  return result;
}

BaselinePrediction predict_baseline(const BaselineDynamicsNet& net,
                                    const mdp::Normalizer& normalizer, const Matrix& states,
                                    const Matrix& actions) {
  const auto& layout = net.layout();
  require(normalizer.dim() == layout.dim(), "predict_baseline: normalizer dimension mismatch");
  require(states.rows() == layout.state_dim() && actions.rows() == layout.action_dim() &&
              states.cols() == actions.cols(),
          "predict_baseline: query shape mismatch");
  const Index n_in = layout.state_dim() + layout.action_dim();
  const Index n_out = layout.state_dim() + 1;
  Matrix in(n_in, states.cols());
  in.topRows(layout.state_dim()) = states;
  in.bottomRows(layout.action_dim()) = actions;
  const Vector in_mean = normalizer.mean.head(n_in);
  const Vector in_std = normalizer.std.head(n_in);
  in = ((in.colwise() - in_mean).array().colwise() / in_std.array()).matrix();
  Matrix out = net.forward(in);
  out = ((out.array().colwise() * normalizer.std.tail(n_out).array()).colwise() +
         normalizer.mean.tail(n_out).array())
            .matrix();
  return {out.topRows(layout.state_dim()), out.row(layout.state_dim()).transpose()};
}

}  // namespace moodcrl::world
