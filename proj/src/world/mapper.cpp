#include "moodcrl/world/mapper.hpp"

#include <cmath>
#include <string>

#include "../batching.hpp"
#include "moodcrl/errors.hpp"
#include "moodcrl/nn/adam.hpp"

namespace moodcrl::world {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

MapperNet::MapperNet(Index dim, const MapperConfig& config) : dim_(dim), config_(config) {
  require(dim > 0, "mapper dimension must be positive");
  Rng rng(config.seed);
  skip_ = params_.add("mapper.skip", Matrix::Identity(dim, dim));
  net_ = nn::DenseStack(params_, "mapper",
                        nn::DenseStack::mlp_specs(dim, config.hidden, dim, config.activation),
                        rng, nn::FinalInit::zeros);
}

Matrix MapperNet::forward(const Matrix& u_perturbed) const {
  require(u_perturbed.rows() == dim_, "mapper: input has the wrong dimension");
  return params_.value(skip_) * u_perturbed + net_.forward(params_, u_perturbed);
}

double MapperNet::l1_loss(const Matrix& u_perturbed, const Matrix& u_true) const {
  require(u_true.rows() == dim_ && u_true.cols() == u_perturbed.cols() && u_true.cols() > 0,
          "mapper loss: shape mismatch");
  return (u_true - forward(u_perturbed)).cwiseAbs().sum() / static_cast<double>(u_true.cols());
}

double MapperNet::l1_loss_and_grad(const Matrix& u_perturbed, const Matrix& u_true,
                                   nn::GradStore& grads) const {
  require(u_perturbed.rows() == dim_ && u_true.rows() == dim_ &&
              u_true.cols() == u_perturbed.cols() && u_true.cols() > 0,
          "mapper loss: shape mismatch");
  nn::DenseTape tape;
  const Matrix pred = params_.value(skip_) * u_perturbed + net_.forward(params_, u_perturbed, tape);
  const Matrix diff = pred - u_true;
  const double inv_b = 1.0 / static_cast<double>(u_true.cols());
  const Matrix d_pred = diff.unaryExpr([inv_b](double v) { return sign(v) * inv_b; });
  net_.backward(params_, tape, d_pred, grads);
  grads[skip_] += d_pred * u_perturbed.transpose();
  return diff.cwiseAbs().sum() * inv_b;
}

Matrix build_perturbed_raw(const Matrix& states, const Matrix& actions,
                           const mdp::TupleLayout& layout) {
  require(states.rows() == layout.state_dim(), "build_perturbed: state dimension mismatch");
  require(actions.rows() == layout.action_dim(), "build_perturbed: action dimension mismatch");
  require(states.cols() == actions.cols(), "build_perturbed: batch size mismatch");
  Matrix x = Matrix::Zero(layout.dim(), states.cols());
  x.middleRows(layout.state().begin, layout.state_dim()) = states;
  x.middleRows(layout.action().begin, layout.action_dim()) = actions;
  x.middleRows(layout.next_state().begin, layout.state_dim()) = states;
  return x;
}

Vector build_perturbed_raw(const Vector& state, const Vector& action,
                           const mdp::TupleLayout& layout) {
  return build_perturbed_raw(Matrix(state), Matrix(action), layout).col(0);
}

Matrix build_perturbed(const Matrix& states, const Matrix& actions,
                       const mdp::TupleLayout& layout, const mdp::Normalizer& normalizer) {
  require(normalizer.dim() == layout.dim(), "build_perturbed: normalizer dimension mismatch");
  return normalizer.normalize(build_perturbed_raw(states, actions, layout));
}

Matrix perturb_normalized(const Matrix& x_normalized, const mdp::TupleLayout& layout,
                          const mdp::Normalizer& normalizer) {
  require(x_normalized.rows() == layout.dim(), "perturb: data dimension mismatch");
  const Matrix raw = normalizer.denormalize(x_normalized);
  return build_perturbed(raw.middleRows(layout.state().begin, layout.state_dim()),
                         raw.middleRows(layout.action().begin, layout.action_dim()), layout,
                         normalizer);
}

MapperTrainResult train_mapper(MapperNet& mapper, const flow::CausalFlow& flow,
                               const Matrix& x_normalized, const Matrix& x_perturbed_normalized) {
  require(flow.frozen(), "train_mapper: the flow must be trained and frozen first");
  require(mapper.dim() == flow.dim(), "train_mapper: mapper and flow dimensions differ");
  require(x_normalized.cols() > 0 && x_normalized.cols() == x_perturbed_normalized.cols(),
          "train_mapper: data and perturbed data must be non-empty and aligned");
  const MapperConfig& cfg = mapper.config();
  require(cfg.epochs >= 0 && cfg.batch_size > 0 && cfg.lr > 0.0,
          "train_mapper: invalid optimizer settings");

  const Matrix u_true = flow.forward(x_normalized).u;
  const Matrix u_pert = flow.forward(x_perturbed_normalized).u;

  MapperTrainResult result;
  result.initial_loss = mapper.l1_loss(u_pert, u_true);
  const nn::AdamConfig adam{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  auto order = detail::iota_indices(u_true.cols());
  nn::GradStore grads(mapper.params());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double total = 0.0;
    detail::for_each_minibatch(order, cfg.batch_size, rng, [&](std::size_t b, std::size_t e) {
      grads.set_zero();
      const double loss = mapper.l1_loss_and_grad(detail::gather_columns(u_pert, order, b, e),
                                                  detail::gather_columns(u_true, order, b, e),
                                                  grads);
      if (!std::isfinite(loss)) {
        throw NumericError("train_mapper: non-finite loss at epoch " + std::to_string(epoch));
      }
      nn::adam_step(mapper.params(), grads, adam);
      total += loss * static_cast<double>(e - b);
    });
    result.epoch_loss.push_back(total / static_cast<double>(u_true.cols()));
  }
  result.final_loss = mapper.l1_loss(u_pert, u_true);
  return result;
}

}  // namespace moodcrl::world
