#ifndef MOODCRL_POLICY_PPO_HPP_
#define MOODCRL_POLICY_PPO_HPP_

#include "moodcrl/policy/reinforce.hpp"

namespace moodcrl::policy {

inline constexpr double kMaxLogRatio = 20.0;

struct PpoConfig {
  int epochs = 2;
  double clip = 0.2;
  Index minibatch = 64;
  double lr_policy = 1e-4;
  double lr_value = 3e-3;
  double weight_decay = 0.0;
};

struct ClippedTerm {
  double objective = 0.0;  // min(r A, clip(r, 1 - eps, 1 + eps) A)
  bool clipped = false;    // the clipped branch is the active one
};

// Per-sample clipped surrogate; the log-ratio is clamped to +-20 first.
ClippedTerm ppo_clipped_term(double log_ratio, double advantage, double clip);

// K passes of shuffled minibatches over the buffer. Advantages are
// standardized (G - V(s)) computed once before the first pass; the value
// net is regressed to G with squared loss.
UpdateReport ppo_update(PolicyNet& policy, ValueNet& value, const RolloutBuffer& buffer,
                        const PpoConfig& config, Rng& rng);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_PPO_HPP_
