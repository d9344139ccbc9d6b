#ifndef MOODCRL_POLICY_TRAINER_HPP_
#define MOODCRL_POLICY_TRAINER_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/policy/ppo.hpp"
#include "moodcrl/policy/rollout.hpp"
#include "moodcrl/world/transition_model.hpp"

namespace moodcrl::policy {

enum class Algorithm { reinforce, ppo };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct TrainConfig {
  Algorithm algorithm = Algorithm::ppo;
  double gamma = 0.99;
  int horizon = 1000;
  double gate_threshold = -15.0;
  int episodes_per_update = 10;
  int updates = 2000;
  double lr_reinforce = 1e-4;
  PpoConfig ppo;
  PolicyConfig net;
  int eval_every = 50;    // updates between true-environment snapshots
  int eval_episodes = 5;

  void validate() const;
};

struct MetricsRow {
  std::uint64_t seed = 0;
  int update = 0;
  std::int64_t env_steps = 0;  // cumulative model steps
  double mean_return = 0.0;    // mean undiscounted model return of this update's episodes
  double trunc_rate = 0.0;
  double loss_policy = 0.0;
  double loss_value = 0.0;
};

struct CurvePoint {
  int update = 0;
  double eval_return = 0.0;
};

struct TrainResult {
  PolicyNet policy;
  std::vector<MetricsRow> metrics;
  std::vector<CurvePoint> curve;  // includes the final policy
  double final_return = 0.0;
  std::size_t nonfinite_incidents = 0;
};

// Seed of the true-environment evaluation episodes for a training seed.
inline std::uint64_t evaluation_seed(std::uint64_t seed) { return seed + 7919; }

// Policy training against a transition model, with periodic greedy
// evaluation in the true environment `reference`.
TrainResult train_policy(const world::TransitionModel& model, const env::Environment& reference,
                         const std::vector<Vector>& start_states, const TrainConfig& config,
                         std::uint64_t seed);

void write_metrics_header(std::ostream& out);
void write_metrics_rows(std::ostream& out, const std::vector<MetricsRow>& rows);

// Wide layout: update, seed_<s> for each seed; all curves share the same
// update grid.
void write_learning_curve(std::ostream& out, const std::vector<std::uint64_t>& seeds,
                          const std::vector<std::vector<CurvePoint>>& curves);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_TRAINER_HPP_
