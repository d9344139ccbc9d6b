#include "moodcrl/policy/evaluate.hpp"

#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::policy {

EvalResult evaluate_true_env(const PolicyNet& policy, const env::Environment& prototype,
                             int episodes, std::uint64_t seed) {
  require(episodes > 0, "evaluation needs at least one episode");
  auto environment = prototype.clone();
  Rng rng(seed);
  EvalResult res;
  const int horizon = environment->spec().max_steps;
  for (int e = 0; e < episodes; ++e) {
    Vector state = environment->reset(rng);
    double total = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const Matrix a = policy.greedy(state);
      if (!a.allFinite()) throw NumericError("evaluation: policy produced a non-finite action");
      const env::StepResult r = environment->step(environment->bound_action(a.col(0)));
      total += r.reward;
      state = r.next_state;
      if (r.done) break;
    }
    res.returns.push_back(total);
  }
  const auto n = static_cast<double>(episodes);
  double sum = 0.0;
  for (double r : res.returns) sum += r;
  res.mean_return = sum / n;
  if (episodes > 1) {
    double ss = 0.0;
    for (double r : res.returns) ss += (r - res.mean_return) * (r - res.mean_return);
    res.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return res;
}

}  // namespace moodcrl::policy
