#ifndef MOODCRL_POLICY_REINFORCE_HPP_
#define MOODCRL_POLICY_REINFORCE_HPP_

#include "moodcrl/nn/adam.hpp"
#include "moodcrl/policy/policy_net.hpp"
#include "moodcrl/policy/rollout.hpp"

namespace moodcrl::policy {

// Advantages G - mean(G) divided by max(std(G), 1e-6). When every return is
// identical the raw (all-zero) advantages are returned unscaled.
Vector standardized_advantages(const Vector& returns);

// Surrogate loss -mean_t log pi(a_t|s_t) * A_t for the given advantages.
double reinforce_surrogate(const PolicyNet& policy, const RolloutBuffer& buffer,
                           const Vector& advantages);

struct UpdateReport {
  double loss_policy = 0.0;
  double loss_value = 0.0;
  bool applied = false;
};

// One Adam step on the surrogate with standardized return advantages.
UpdateReport reinforce_update(PolicyNet& policy, const RolloutBuffer& buffer,
                              const nn::AdamConfig& adam);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_REINFORCE_HPP_
