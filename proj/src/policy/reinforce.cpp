#include "moodcrl/policy/reinforce.hpp"

#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::policy {

Vector standardized_advantages(const Vector& returns) {
  require(returns.size() > 0, "advantages of an empty batch");
  const Vector centered = returns.array() - returns.mean();
  if (centered.cwiseAbs().maxCoeff() == 0.0) return centered;
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(returns.size()));
  return centered / std::max(sd, 1e-6);
}

double reinforce_surrogate(const PolicyNet& policy, const RolloutBuffer& buffer,
                           const Vector& advantages) {
  const Vector lp = policy.log_prob(buffer.states(), buffer.actions());
  return -(lp.array() * advantages.array()).mean();
}

UpdateReport reinforce_update(PolicyNet& policy, const RolloutBuffer& buffer,
                              const nn::AdamConfig& adam) {
  require(!buffer.empty(), "reinforce_update: empty buffer");
  const Vector adv = standardized_advantages(buffer.returns_vector());
  const auto n = static_cast<double>(adv.size());
  nn::GradStore grads(policy.params());
  // The loss is -mean(logp * A); log_prob_and_grad accumulates d(sum w * logp).
  const Vector lp =
      policy.log_prob_and_grad(buffer.states(), buffer.actions(), -adv / n, grads);
  UpdateReport report;
  report.loss_policy = -(lp.array() * adv.array()).mean();
  report.applied = nn::adam_step(policy.params(), grads, adam).applied;
  return report;
}

}  // namespace moodcrl::policy
