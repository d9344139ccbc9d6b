#ifndef MOODCRL_POLICY_EVALUATE_HPP_
#define MOODCRL_POLICY_EVALUATE_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/policy/policy_net.hpp"

namespace moodcrl::policy {

struct EvalResult {
  double mean_return = 0.0;
  double std_error = 0.0;
  std::vector<double> returns;  // undiscounted, one per episode
};

// Greedy (mean / argmax) actions in a fresh copy of the environment;
// deterministic for a given seed.
EvalResult evaluate_true_env(const PolicyNet& policy, const env::Environment& prototype,
                             int episodes, std::uint64_t seed);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_EVALUATE_HPP_
