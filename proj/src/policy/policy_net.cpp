#include "moodcrl/policy/policy_net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "moodcrl/errors.hpp"

namespace moodcrl::policy {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

Matrix log_softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index k = 0; k < logits.cols(); ++k) {
    const double m = logits.col(k).maxCoeff();
    const double lse = m + std::log((logits.col(k).array() - m).exp().sum());
    out.col(k) = logits.col(k).array() - lse;
  }
  return out;
}

int action_index(double a, Index n) {
  const double r = std::round(a);
  if (!(r >= 0.0 && r < static_cast<double>(n)) || r != a) {
    throw ValidationError("discrete action out of range");
  }
  return static_cast<int>(r);
}

}  // namespace

PolicyNet::PolicyNet(Index state_dim, Index head_dim, bool discrete, const PolicyConfig& config)
    : state_dim_(state_dim), head_dim_(head_dim), discrete_(discrete), config_(config) {
  require(state_dim > 0 && head_dim > 0, "policy dimensions must be positive");
  require(config.init_log_std >= kMinLogStd && config.init_log_std <= kMaxLogStd,
          "initial log-std outside [-5, 2]");
  Rng rng(config.seed);
  body_ = nn::DenseStack(params_, "policy",
                         nn::DenseStack::mlp_specs(state_dim, config.hidden, head_dim,
                                                   config.activation),
                         rng);
  log_std_ = params_.add("policy.log_std",
                         Matrix::Constant(discrete ? 1 : head_dim, 1, config.init_log_std));
}

PolicyNet PolicyNet::gaussian(Index state_dim, Index action_dim, const PolicyConfig& config) {
  return PolicyNet(state_dim, action_dim, false, config);
}

PolicyNet PolicyNet::categorical(Index state_dim, int num_actions, const PolicyConfig& config) {
  require(num_actions >= 2, "a categorical policy needs at least two actions");
  return PolicyNet(state_dim, num_actions, true, config);
}

Matrix PolicyNet::head(const Matrix& states) const {
  require(states.rows() == state_dim_, "policy: state dimension mismatch");
  return body_.forward(params_, states);
}

Vector PolicyNet::log_std() const {
  return params_.value(log_std_).col(0).cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd);
}

Matrix PolicyNet::probabilities(const Matrix& states) const {
  require(discrete_, "probabilities: continuous policy");
  return log_softmax(head(states)).array().exp().matrix();
}

Matrix PolicyNet::sample(const Matrix& states, Rng& rng, Vector& log_probs) const {
  const Matrix h = head(states);
  const Index n = states.cols();
  Matrix actions(action_dim(), n);
  log_probs.resize(n);
  if (discrete_) {
    const Matrix logp = log_softmax(h);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index k = 0; k < n; ++k) {
      const double draw = unit(rng);
      double acc = 0.0;
      Index choice = head_dim_ - 1;
      for (Index j = 0; j < head_dim_; ++j) {
        acc += std::exp(logp(j, k));
        if (draw < acc) {
          choice = j;
          break;
        }
      }
      actions(0, k) = static_cast<double>(choice);
      log_probs[k] = logp(choice, k);
    }
    return actions;
  }
  const Vector ls = log_std();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index k = 0; k < n; ++k) {
    double lp = 0.0;
    for (Index j = 0; j < head_dim_; ++j) {
      const double eps = normal(rng);
      actions(j, k) = h(j, k) + std::exp(ls[j]) * eps;
      lp += -0.5 * eps * eps - ls[j] - kHalfLog2Pi;
    }
    log_probs[k] = lp;
  }
  return actions;
}

Matrix PolicyNet::greedy(const Matrix& states) const {
  const Matrix h = head(states);
  if (!discrete_) return h;
  Matrix actions(1, h.cols());
  for (Index k = 0; k < h.cols(); ++k) {
    Index best = 0;
    h.col(k).maxCoeff(&best);
    actions(0, k) = static_cast<double>(best);
  }
  return actions;
}

Vector PolicyNet::log_prob(const Matrix& states, const Matrix& actions) const {
  const Matrix h = head(states);
  require(actions.rows() == action_dim() && actions.cols() == states.cols(),
          "log_prob: action shape mismatch");
  Vector lp(states.cols());
  if (discrete_) {
    const Matrix logp = log_softmax(h);
    for (Index k = 0; k < h.cols(); ++k) lp[k] = logp(action_index(actions(0, k), head_dim_), k);
    return lp;
  }
  const Vector ls = log_std();
  for (Index k = 0; k < h.cols(); ++k) {
    const auto z = ((actions.col(k) - h.col(k)).array() / ls.array().exp());
    lp[k] = (-0.5 * z.square() - ls.array() - kHalfLog2Pi).sum();
  }
  return lp;
}

Vector PolicyNet::log_prob_and_grad(const Matrix& states, const Matrix& actions,
                                    const Vector& weights, nn::GradStore& grads) const {
  require(states.rows() == state_dim_, "policy: state dimension mismatch");
  require(actions.rows() == action_dim() && actions.cols() == states.cols() &&
              weights.size() == states.cols(),
          "log_prob_and_grad: shape mismatch");
  nn::DenseTape tape;
  const Matrix h = body_.forward(params_, states, tape);
  const Index n = states.cols();
  Vector lp(n);
  Matrix d_head(head_dim_, n);
  if (discrete_) {
    const Matrix logp = log_softmax(h);
    for (Index k = 0; k < n; ++k) {
      const int a = action_index(actions(0, k), head_dim_);
      lp[k] = logp(a, k);
      d_head.col(k) = -weights[k] * logp.col(k).array().exp();
      d_head(a, k) += weights[k];
    }
  } else {
    const Vector ls = log_std();
    const Vector inv_var = (-2.0 * ls).array().exp();
    Vector d_log_std = Vector::Zero(head_dim_);
    for (Index k = 0; k < n; ++k) {
      const Vector diff = actions.col(k) - h.col(k);
      const Vector z2 = diff.array().square() * inv_var.array();
      lp[k] = (-0.5 * z2.array() - ls.array() - kHalfLog2Pi).sum();
      d_head.col(k) = weights[k] * (diff.array() * inv_var.array()).matrix();
      d_log_std += weights[k] * (z2.array() - 1.0).matrix();
    }
    const Vector raw = params_.value(log_std_).col(0);
    for (Index j = 0; j < head_dim_; ++j) {
      // Hard clamp: no gradient flows once the raw value is outside the range.
      if (raw[j] > kMinLogStd && raw[j] < kMaxLogStd) grads[log_std_](j, 0) += d_log_std[j];
    }
  }
  body_.backward(params_, tape, d_head, grads);
  return lp;
}

ValueNet::ValueNet(Index state_dim, const PolicyConfig& config) {
  Rng rng(config.seed ^ 0xa5a5a5a5a5a5a5a5ULL);
  net_ = nn::DenseStack(params_, "value",
                        nn::DenseStack::mlp_specs(state_dim, config.hidden, 1, config.activation),
                        rng);
}

Vector ValueNet::predict(const Matrix& states) const {
  return net_.forward(params_, states).row(0).transpose();
}

double ValueNet::mse_and_grad(const Matrix& states, const Vector& targets,
                              nn::GradStore& grads) const {
  require(targets.size() == states.cols() && states.cols() > 0, "value loss: shape mismatch");
  nn::DenseTape tape;
  const Vector diff = net_.forward(params_, states, tape).row(0).transpose() - targets;
  const double inv_n = 1.0 / static_cast<double>(targets.size());
  net_.backward(params_, tape, (2.0 * inv_n * diff).transpose(), grads);
  return diff.squaredNorm() * inv_n;
}

}  // namespace moodcrl::policy
