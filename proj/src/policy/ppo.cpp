#include "moodcrl/policy/ppo.hpp"

#include <algorithm>
#include <cmath>

#include "../batching.hpp"
#include "moodcrl/errors.hpp"

namespace moodcrl::policy {

ClippedTerm ppo_clipped_term(double log_ratio, double advantage, double clip) {
  const double ratio = std::exp(std::clamp(log_ratio, -kMaxLogRatio, kMaxLogRatio));
  const double unclipped = ratio * advantage;
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage;
  if (clipped < unclipped) return {clipped, true};
  return {unclipped, false};
}

UpdateReport ppo_update(PolicyNet& policy, ValueNet& value, const RolloutBuffer& buffer,
                        const PpoConfig& config, Rng& rng) {
  require(!buffer.empty(), "ppo_update: empty buffer");
  require(config.epochs >= 1 && config.minibatch > 0 && config.clip > 0.0,
          "ppo_update: invalid settings");
  const Matrix states = buffer.states();
  const Matrix actions = buffer.actions();
  const Vector old_logp = buffer.log_probs();
  const Vector returns = buffer.returns_vector();
  const Vector adv = standardized_advantages(returns - value.predict(states));

  const nn::AdamConfig pi_adam{.lr = config.lr_policy, .weight_decay = config.weight_decay};
  const nn::AdamConfig v_adam{.lr = config.lr_value, .weight_decay = config.weight_decay};
  nn::GradStore pi_grads(policy.params());
  nn::GradStore v_grads(value.params());
  auto order = detail::iota_indices(states.cols());

  UpdateReport report;
  double pi_total = 0.0;
  double v_total = 0.0;
  std::size_t batches = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    detail::for_each_minibatch(order, config.minibatch, rng, [&](std::size_t b, std::size_t e) {
      const auto m = static_cast<Index>(e - b);
      const Matrix s = detail::gather_columns(states, order, b, e);
      const Matrix a = detail::gather_columns(actions, order, b, e);
      Vector ret(m), old(m), ad(m);
      for (Index k = 0; k < m; ++k) {
        const Index src = order[b + static_cast<std::size_t>(k)];
        ret[k] = returns[src];
        old[k] = old_logp[src];
        ad[k] = adv[src];
      }
      const Vector new_logp = policy.log_prob(s, a);
      Vector weights(m);
      double objective = 0.0;
      for (Index k = 0; k < m; ++k) {
        const double log_ratio = new_logp[k] - old[k];
        const ClippedTerm term = ppo_clipped_term(log_ratio, ad[k], config.clip);
        objective += term.objective;
        const bool saturated = std::abs(log_ratio) >= kMaxLogRatio;
        // d(-mean objective)/d logp; zero on the clipped branch or a clamped ratio.
        weights[k] = (term.clipped || saturated) ? 0.0 : -term.objective / static_cast<double>(m);
      }
      pi_grads.set_zero();
      policy.log_prob_and_grad(s, a, weights, pi_grads);
      nn::adam_step(policy.params(), pi_grads, pi_adam);

      v_grads.set_zero();
      v_total += value.mse_and_grad(s, ret, v_grads);
      nn::adam_step(value.params(), v_grads, v_adam);

      pi_total += -objective / static_cast<double>(m);
      ++batches;
    });
  }
  report.loss_policy = pi_total / static_cast<double>(batches);
  report.loss_value = v_total / static_cast<double>(batches);
  report.applied = true;
  return report;
}

}  // namespace moodcrl::policy
