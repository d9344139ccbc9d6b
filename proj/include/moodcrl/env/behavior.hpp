#ifndef MOODCRL_ENV_BEHAVIOR_HPP_
#define MOODCRL_ENV_BEHAVIOR_HPP_

#include <cstdint>
#include <vector>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/mdp/dataset.hpp"
#include "moodcrl/policy/policy_net.hpp"

namespace moodcrl::env {

struct BehaviorConfig {
  double lr = 1e-4;
  double gamma = 0.99;
  policy::PolicyConfig net;
  std::uint64_t seed = 0;
};

// Every transition of an online REINFORCE run (one update per episode),
// with applied actions. Episode indices start at 0.
struct BehaviorRun {
  mdp::TupleLayout layout;
  std::vector<bool> discrete_dims;
  std::vector<mdp::TransitionTuple> tuples;
  std::vector<int> episodes;
  std::vector<double> episode_returns;
};

BehaviorRun run_behavior_reinforce(const Environment& prototype, int num_episodes,
                                   const BehaviorConfig& config);

// Tuples whose episode index lies in [episodes_lo, episodes_hi).
mdp::Dataset window_dataset(const BehaviorRun& run, int episodes_lo, int episodes_hi,
                            mdp::Quality quality = mdp::Quality::custom);

// Runs REINFORCE from scratch for episodes_hi episodes and keeps the window.
mdp::Dataset generate_behavior_dataset(const Environment& prototype, int episodes_lo,
                                       int episodes_hi, const BehaviorConfig& config);

struct QualityDatasets {
  mdp::Dataset low;
  mdp::Dataset medium;
  // The medium window held fewer tuples than the low dataset and was
  // resampled with replacement.
  bool medium_resampled = false;
  // Undiscounted returns of every episode in each window (before subsampling).
  std::vector<double> low_returns;
  std::vector<double> medium_returns;
};

// One run of `medium_end` episodes: low = [0, low_end), medium =
// [low_end, medium_end) subsampled to the low dataset's size.
QualityDatasets generate_quality_datasets(const Environment& prototype,
                                          const BehaviorConfig& config, int low_end = 2000,
                                          int medium_end = 3000);

// Subsample (sorted index order) to `size` tuples; without replacement when
// possible.
mdp::Dataset subsample(const mdp::Dataset& dataset, std::size_t size, std::uint64_t seed,
                       bool& with_replacement);

}  // namespace moodcrl::env

#endif  // MOODCRL_ENV_BEHAVIOR_HPP_
