#ifndef MOODCRL_POLICY_ROLLOUT_HPP_
#define MOODCRL_POLICY_ROLLOUT_HPP_

#include <limits>
#include <vector>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/policy/policy_net.hpp"
#include "moodcrl/world/transition_model.hpp"

namespace moodcrl::policy {

// G_t = sum_{k >= t} gamma^(k - t) r_k, by backward recursion.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

struct RolloutStep {
  Vector state;
  Vector action;            // as sampled by the policy (before bounding)
  double log_prob = 0.0;    // log pi(action | state) at sampling time
  double reward = 0.0;
  Vector next_state;
  bool done = false;        // environment-semantic termination
  bool truncated = false;   // last step of an episode cut short by the gate or horizon
  double model_log_prob = std::numeric_limits<double>::quiet_NaN();  // gate score
};

enum class EpisodeEnd { terminated, horizon, gate, nonfinite };

struct EpisodeRecord {
  std::size_t begin = 0;  // step range [begin, end)
  std::size_t end = 0;
  double total_reward = 0.0;
  EpisodeEnd end_reason = EpisodeEnd::horizon;
  // Gate score of the transition that was dropped by the gate, if any.
  double dropped_log_prob = std::numeric_limits<double>::quiet_NaN();
};

class RolloutBuffer {
 public:
  explicit RolloutBuffer(double gamma = 0.99);

  void add_episode(std::vector<RolloutStep> steps, EpisodeEnd reason,
                   double dropped_log_prob = std::numeric_limits<double>::quiet_NaN());

  double gamma() const { return gamma_; }
  const std::vector<RolloutStep>& steps() const { return steps_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }
  // Discounted return-to-go of every step, aligned with steps().
  const std::vector<double>& returns() const { return returns_; }

  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }
  Matrix states() const;
  Matrix actions() const;
  Vector log_probs() const;
  Vector returns_vector() const;

  double mean_episode_reward() const;
  // Fraction of episodes ended by the gate (non-finite predictions included).
  double gate_truncation_rate() const;
  std::size_t nonfinite_incidents() const;

 private:
  double gamma_;
  std::vector<RolloutStep> steps_;
  std::vector<EpisodeRecord> episodes_;
  std::vector<double> returns_;
};

struct RolloutConfig {
  double gamma = 0.99;
  int horizon = 1000;
  // Truncate when the model log-likelihood is strictly below this value.
  double gate_threshold = -15.0;
  int episodes = 10;
};

// Runs `config.episodes` episodes in parallel against the model. Start states
// are drawn uniformly from `start_states`. Per step: a ~ pi(.|s), the bounded
// action is fed to the model, and the episode ends when the gate fires
// (that transition is dropped), the predicted state is terminal under
// `semantics`, the prediction is non-finite (dropped, logged as an incident),
// or the horizon is reached.
RolloutBuffer rollout_world_model(const PolicyNet& policy, const world::TransitionModel& model,
                                  const env::Environment& semantics,
                                  const std::vector<Vector>& start_states,
                                  const RolloutConfig& config, Rng& rng);

// Stochastic rollouts in the true environment.
RolloutBuffer rollout_true_env(const PolicyNet& policy, env::Environment& environment,
                               int episodes, double gamma, Rng& rng);

// Number of episodes of a recorded rollout that the gate would cut at
// threshold c: an episode counts when any recorded gate score is below c.
std::size_t rescore_gate(const RolloutBuffer& buffer, double threshold);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_ROLLOUT_HPP_
