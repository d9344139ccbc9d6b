#include "moodcrl/flow/causal_flow.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::flow {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

struct LayerTape {
  Matrix z_in;
  Matrix raw;
  Matrix log_scale;
  Matrix scale;
  nn::DenseTape net;
};

}  // namespace

double standard_normal_log_density(const Matrix& u, Index col) {
  return -0.5 * u.col(col).squaredNorm() - static_cast<double>(u.rows()) * kHalfLog2Pi;
}

CausalFlow::CausalFlow(mdp::CausalGraph graph, FlowConfig config, std::uint64_t seed)
    : graph_(std::move(graph)), config_(std::move(config)) {
  require(config_.num_layers >= 1, "flow needs at least one layer");
  require(config_.log_scale_bound > 0.0, "log-scale bound must be positive");
  masks_ = mask_from_graph(graph_, config_.hidden);
  const Index d = graph_.dim();
  Rng rng(seed);
  for (int k = 0; k < config_.num_layers; ++k) {
    std::vector<nn::MaskedLinearSpec> specs;
    Index prev = d;
    for (std::size_t l = 0; l < config_.hidden.size(); ++l) {
      specs.push_back({prev, config_.hidden[l], masks_.layer_masks[l], config_.activation});
      prev = config_.hidden[l];
    }
    specs.push_back({prev, 2 * d, masks_.layer_masks.back(), nn::Activation::identity});
    conditioners_.emplace_back(params_, "flow." + std::to_string(k), std::move(specs), rng,
                               nn::FinalInit::zeros);
  }
  levels_.assign(static_cast<std::size_t>(graph_.max_depth() + 1), {});
  for (Index v : graph_.topological_order()) levels_[graph_.depth()[v]].push_back(v);
}

double CausalFlow::clamp_log_scale(double raw) const {
  const double b = config_.log_scale_bound;
  return b * std::tanh(raw / b);
}

void CausalFlow::conditioner(std::size_t layer, const Matrix& z, Matrix& shift,
                             Matrix& log_scale) const {
  const Index d = dim();
  const Matrix out = conditioners_.at(layer).forward(params_, z);
  shift = out.topRows(d);
  log_scale = out.bottomRows(d).unaryExpr([this](double r) { return clamp_log_scale(r); });
}

CausalFlow::ForwardResult CausalFlow::forward(const Matrix& x) const {
  require(x.rows() == dim(), "flow forward: expected " + std::to_string(dim()) + " rows");
  if (!x.allFinite()) throw NumericError("flow forward: non-finite input");
  ForwardResult res;
  res.u = x;
  res.log_det = Vector::Zero(x.cols());
  Matrix shift;
  Matrix log_scale;
  for (std::size_t k = 0; k < conditioners_.size(); ++k) {
    conditioner(k, res.u, shift, log_scale);
    res.u = (res.u.array() * log_scale.array().exp() + shift.array()).matrix();
    res.log_det += log_scale.colwise().sum().transpose();
    if (!res.u.allFinite() || !res.log_det.allFinite()) {
      throw NumericError("flow forward: non-finite values after layer " + std::to_string(k));
    }
  }
  return res;
}

Matrix CausalFlow::inverse(const Matrix& u) const {
  require(u.rows() == dim(), "flow inverse: expected " + std::to_string(dim()) + " rows");
  if (!u.allFinite()) throw NumericError("flow inverse: non-finite input");
  Matrix z = u;
  Matrix shift;
  Matrix log_scale;
  for (std::size_t k = conditioners_.size(); k-- > 0;) {
    Matrix x = Matrix::Zero(z.rows(), z.cols());
    for (const auto& level : levels_) {
      conditioner(k, x, shift, log_scale);
      for (Index i : level) {
        x.row(i) = ((z.row(i) - shift.row(i)).array() * (-log_scale.row(i)).array().exp()).matrix();
      }
    }
    if (!x.allFinite()) {
      throw NumericError("flow inverse: non-finite values in layer " + std::to_string(k));
    }
    z = std::move(x);
  }
  return z;
}

Vector CausalFlow::log_prob(const Matrix& x) const {
  const ForwardResult f = forward(x);
  Vector lp(x.cols());
  for (Index n = 0; n < x.cols(); ++n) lp[n] = standard_normal_log_density(f.u, n) + f.log_det[n];
  return lp;
}

double CausalFlow::nll(const Matrix& x) const {
  require(x.cols() > 0, "nll of an empty batch");
  return -log_prob(x).mean();
}

double CausalFlow::nll_and_grad(const Matrix& x, nn::GradStore& grads) const {
  require(x.rows() == dim() && x.cols() > 0, "nll_and_grad: bad batch shape");
  const Index d = dim();
  const double inv_b = 1.0 / static_cast<double>(x.cols());
  const double bound = config_.log_scale_bound;

  std::vector<LayerTape> tapes(conditioners_.size());
  Matrix z = x;
  Vector log_det = Vector::Zero(x.cols());
  for (std::size_t k = 0; k < conditioners_.size(); ++k) {
    LayerTape& t = tapes[k];
    t.z_in = z;
    const Matrix out = conditioners_[k].forward(params_, z, t.net);
    t.raw = out.bottomRows(d);
    t.log_scale = t.raw.unaryExpr([this](double r) { return clamp_log_scale(r); });
    t.scale = t.log_scale.array().exp().matrix();
    z = (z.array() * t.scale.array() + out.topRows(d).array()).matrix();
    log_det += t.log_scale.colwise().sum().transpose();
  }
  if (!z.allFinite()) throw NumericError("nll_and_grad: non-finite base-space values");

  double loss = 0.0;
  for (Index n = 0; n < x.cols(); ++n) loss -= standard_normal_log_density(z, n) + log_det[n];
  loss *= inv_b;

  Matrix g = z * inv_b;  // d loss / d u
  Matrix d_out(2 * d, x.cols());
  for (std::size_t k = conditioners_.size(); k-- > 0;) {
    const LayerTape& t = tapes[k];
    const Matrix d_log_scale =
        (g.array() * t.z_in.array() * t.scale.array() - inv_b).matrix();
    d_out.topRows(d) = g;
    d_out.bottomRows(d) =
        (d_log_scale.array() * (1.0 - (t.raw.array() / bound).tanh().square())).matrix();
    const Matrix d_z_cond = conditioners_[k].backward(params_, t.net, d_out, grads);
    g = (g.array() * t.scale.array()).matrix() + d_z_cond;
  }
  return loss;
}

Matrix CausalFlow::sample(Index n, std::uint64_t seed) const {
  require(n > 0, "sample count must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix u(dim(), n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < dim(); ++i) u(i, j) = normal(rng);
  }
  return inverse(u);
}

}  // namespace moodcrl::flow
