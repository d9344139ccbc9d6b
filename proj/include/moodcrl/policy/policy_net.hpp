#ifndef MOODCRL_POLICY_POLICY_NET_HPP_
#define MOODCRL_POLICY_POLICY_NET_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/nn/dense.hpp"

namespace moodcrl::policy {

inline constexpr double kMinLogStd = -5.0;
inline constexpr double kMaxLogStd = 2.0;

struct PolicyConfig {
  std::vector<Index> hidden{64, 64};
  nn::Activation activation = nn::Activation::tanh;
  double init_log_std = 0.0;
  std::uint64_t seed = 0;
};

// Stochastic policy with a tanh MLP body. The continuous head is a diagonal
// Gaussian with a state-independent log-std (clamped to [-5, 2]); the
// discrete head emits action logits and actions are 1-vectors holding the
// action index.
class PolicyNet {
 public:
  static PolicyNet gaussian(Index state_dim, Index action_dim, const PolicyConfig& config = {});
  static PolicyNet categorical(Index state_dim, int num_actions, const PolicyConfig& config = {});

  bool discrete() const { return discrete_; }
  Index state_dim() const { return state_dim_; }
  // Length of the action vector handed to the environment.
  Index action_dim() const { return discrete_ ? 1 : head_dim_; }
  int num_actions() const { return discrete_ ? static_cast<int>(head_dim_) : 0; }

  // Gaussian mean or logits, head_dim x B.
  Matrix head(const Matrix& states) const;
  Vector log_std() const;
  // Softmax over logits (discrete only).
  Matrix probabilities(const Matrix& states) const;

  // Draws one action per column; `log_probs` receives log pi(a|s).
  Matrix sample(const Matrix& states, Rng& rng, Vector& log_probs) const;
  // Gaussian mean or argmax action.
  Matrix greedy(const Matrix& states) const;

  Vector log_prob(const Matrix& states, const Matrix& actions) const;
  // Accumulates the gradient of sum_k weights[k] * log pi(a_k|s_k) and returns log pi.
  Vector log_prob_and_grad(const Matrix& states, const Matrix& actions, const Vector& weights,
                           nn::GradStore& grads) const;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const PolicyConfig& config() const { return config_; }

 private:
  PolicyNet(Index state_dim, Index head_dim, bool discrete, const PolicyConfig& config);

  Index state_dim_ = 0;
  Index head_dim_ = 0;
  bool discrete_ = false;
  PolicyConfig config_;
  nn::ParamStore params_;
  nn::DenseStack body_;
  nn::ParamId log_std_;
};

// State-value regressor with the same body shape as the policy.
class ValueNet {
 public:
  ValueNet(Index state_dim, const PolicyConfig& config);

  Vector predict(const Matrix& states) const;
  // Mean squared error; accumulates its gradient.
  double mse_and_grad(const Matrix& states, const Vector& targets, nn::GradStore& grads) const;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

 private:
  nn::ParamStore params_;
  nn::DenseStack net_;
};

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_POLICY_NET_HPP_
