#include "moodcrl/env/behavior.hpp"

#include <algorithm>
#include <numeric>

#include "moodcrl/errors.hpp"
#include "moodcrl/policy/reinforce.hpp"

namespace moodcrl::env {

BehaviorRun run_behavior_reinforce(const Environment& prototype, int num_episodes,
                                   const BehaviorConfig& config) {
  require(num_episodes >= 0, "behavior run: negative episode count");
  auto environment = prototype.clone();
  const EnvSpec& spec = environment->spec();
  policy::PolicyConfig net_cfg = config.net;
  net_cfg.seed = config.seed;
  policy::PolicyNet pi =
      spec.discrete_action ? policy::PolicyNet::categorical(spec.state_dim, spec.num_actions, net_cfg)
                           : policy::PolicyNet::gaussian(spec.state_dim, spec.action_dim, net_cfg);
  Rng rng(config.seed + 0x51ed270b27ULL);
  const nn::AdamConfig adam{.lr = config.lr};

  BehaviorRun run;
  run.layout = spec.layout();
  run.discrete_dims = spec.discrete_tuple_dims;
  for (int e = 0; e < num_episodes; ++e) {
    const policy::RolloutBuffer buffer =
        policy::rollout_true_env(pi, *environment, 1, config.gamma, rng);
    run.episode_returns.push_back(buffer.mean_episode_reward());
    for (const auto& step : buffer.steps()) {
      run.tuples.push_back(
          {step.state, environment->bound_action(step.action), step.next_state, step.reward});
      run.episodes.push_back(e);
    }
    if (!buffer.empty()) policy::reinforce_update(pi, buffer, adam);
  }
  return run;
}

mdp::Dataset window_dataset(const BehaviorRun& run, int episodes_lo, int episodes_hi,
                            mdp::Quality quality) {
  require(0 <= episodes_lo && episodes_lo < episodes_hi, "episode window must satisfy 0 <= lo < hi");
  mdp::Dataset ds;
  ds.layout = run.layout;
  ds.quality = quality;
  ds.discrete_dims = run.discrete_dims;
  for (std::size_t k = 0; k < run.tuples.size(); ++k) {
    if (run.episodes[k] >= episodes_lo && run.episodes[k] < episodes_hi) {
      ds.push_back(run.tuples[k], run.episodes[k]);
    }
  }
  return ds;
}

mdp::Dataset generate_behavior_dataset(const Environment& prototype, int episodes_lo,
                                       int episodes_hi, const BehaviorConfig& config) {
  require(0 <= episodes_lo && episodes_lo < episodes_hi, "episode window must satisfy 0 <= lo < hi");
  return window_dataset(run_behavior_reinforce(prototype, episodes_hi, config), episodes_lo,
                        episodes_hi);
}

mdp::Dataset subsample(const mdp::Dataset& dataset, std::size_t size, std::uint64_t seed,
                       bool& with_replacement) {
  require(!dataset.empty() || size == 0, "cannot subsample an empty dataset");
  Rng rng(seed);
  std::vector<std::size_t> picks;
  with_replacement = size > dataset.size();
  if (with_replacement) {
    std::uniform_int_distribution<std::size_t> any(0, dataset.size() - 1);
    for (std::size_t k = 0; k < size; ++k) picks.push_back(any(rng));
  } else {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::sample(all.begin(), all.end(), std::back_inserter(picks), size, rng);
  }
  std::sort(picks.begin(), picks.end());
  mdp::Dataset out;
  out.layout = dataset.layout;
  out.quality = dataset.quality;
  out.discrete_dims = dataset.discrete_dims;
  for (std::size_t k : picks) out.push_back(dataset.tuples[k], dataset.episodes[k]);
  return out;
}

QualityDatasets generate_quality_datasets(const Environment& prototype,
                                          const BehaviorConfig& config, int low_end,
                                          int medium_end) {
  require(0 < low_end && low_end < medium_end, "quality windows must satisfy 0 < low < medium");
  const BehaviorRun run = run_behavior_reinforce(prototype, medium_end, config);
  QualityDatasets out;
  out.low = window_dataset(run, 0, low_end, mdp::Quality::low);
  const mdp::Dataset medium_window = window_dataset(run, low_end, medium_end, mdp::Quality::medium);
  out.medium = subsample(medium_window, out.low.size(), config.seed + 104729, out.medium_resampled);
  out.low_returns.assign(run.episode_returns.begin(), run.episode_returns.begin() + low_end);
  out.medium_returns.assign(run.episode_returns.begin() + low_end, run.episode_returns.end());
  return out;
}

}  // namespace moodcrl::env
