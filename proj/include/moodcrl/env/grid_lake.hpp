#ifndef MOODCRL_ENV_GRID_LAKE_HPP_
#define MOODCRL_ENV_GRID_LAKE_HPP_

#include <set>
#include <utility>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/mdp/dataset.hpp"

namespace moodcrl::env {

// Deterministic square grid, row-major state indices starting at the
// top-left corner. Default: 15 x 15, no obstacles, start 0, goal 224.
struct GridLakeConfig {
  int side = 15;
  std::set<int> obstacles;
  int goal = 224;
  int start = 0;
  int max_steps = 200;

  int num_states() const { return side * side; }
  void validate() const;
};

enum class GridAction : int { left = 0, down = 1, right = 2, up = 3 };
inline constexpr int kGridActions = 4;

struct GridStep {
  int next_state = 0;
  double reward = 0.0;
  bool done = false;
};

// Moves into the boundary or an obstacle leave the agent in place. Reward is
// 1 (and the episode ends) exactly when the next state is the goal.
GridStep grid_step(const GridLakeConfig& config, int state, int action);

class GridLake final : public Environment {
 public:
  explicit GridLake(GridLakeConfig config = {});

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;
  Vector bound_action(const Vector& raw) const override;
  bool is_terminal(const Vector& next_state) const override;
  std::unique_ptr<Environment> clone() const override;

  const GridLakeConfig& config() const { return config_; }

 private:
  GridLakeConfig config_;
  EnvSpec spec_;
  int state_ = 0;
  int steps_ = 0;
};

struct GridSplit {
  mdp::Dataset train;
  mdp::Dataset test;
};

// Every (s, a) with s neither the goal nor an obstacle; s >= threshold goes to
// train, the rest to test. Each tuple is its own episode.
GridSplit frozenlake_split(const GridLakeConfig& config, int threshold = 45);

}  // namespace moodcrl::env

#endif  // MOODCRL_ENV_GRID_LAKE_HPP_
