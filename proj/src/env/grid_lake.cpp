#include "moodcrl/env/grid_lake.hpp"

#include <cmath>
#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::env {

void GridLakeConfig::validate() const {
  require(side >= 2, "grid side must be at least 2");
  require(goal >= 0 && goal < num_states(), "goal index out of range");
  require(start >= 0 && start < num_states(), "start index out of range");
  require(!obstacles.contains(goal), "goal cannot be an obstacle");
  require(!obstacles.contains(start), "start cannot be an obstacle");
  for (int o : obstacles) require(o >= 0 && o < num_states(), "obstacle index out of range");
  require(max_steps > 0, "grid max_steps must be positive");
}

GridStep grid_step(const GridLakeConfig& config, int state, int action) {
  if (action < 0 || action >= kGridActions) {
    throw ValidationError("invalid grid action " + std::to_string(action));
  }
  require(state >= 0 && state < config.num_states(), "grid state out of range");
  require(!config.obstacles.contains(state), "grid state is an obstacle");
  const int row = state / config.side;
  const int col = state % config.side;
  int nrow = row;
  int ncol = col;
  switch (static_cast<GridAction>(action)) {
    case GridAction::left:
      --ncol;
      break;
    case GridAction::down:
      ++nrow;
      break;
    case GridAction::right:
      ++ncol;
      break;
    case GridAction::up:
      --nrow;
      break;
  }
  int next = state;
  if (nrow >= 0 && nrow < config.side && ncol >= 0 && ncol < config.side) {
    const int candidate = nrow * config.side + ncol;
    if (!config.obstacles.contains(candidate)) next = candidate;
  }
  GridStep out;
  out.next_state = next;
  out.done = next == config.goal;
  out.reward = out.done ? 1.0 : 0.0;
  return out;
}

GridLake::GridLake(GridLakeConfig config) : config_(std::move(config)) {
  config_.validate();
  spec_.id = "gridlake";
  spec_.state_dim = 1;
  spec_.action_dim = 1;
  spec_.discrete_action = true;
  spec_.num_actions = kGridActions;
  spec_.max_steps = config_.max_steps;
  spec_.discrete_tuple_dims = {true, true, true, true};
}

Vector GridLake::reset(Rng&) {
  state_ = config_.start;
  steps_ = 0;
  return Vector::Constant(1, state_);
}

StepResult GridLake::step(const Vector& action) {
  require(action.size() == 1, "grid action must be a single index");
  const GridStep g = grid_step(config_, state_, static_cast<int>(action[0]));
  state_ = g.next_state;
  ++steps_;
  return {Vector::Constant(1, state_), g.reward, g.done || steps_ >= config_.max_steps};
}

Vector GridLake::bound_action(const Vector& raw) const {
  require(raw.size() == 1, "grid action must be a single index");
  const double a = std::round(raw[0]);
  require(a >= 0 && a < kGridActions, "grid action out of range");
  return Vector::Constant(1, a);
}

bool GridLake::is_terminal(const Vector& next_state) const {
  return static_cast<int>(std::lround(next_state[0])) == config_.goal;
}

std::unique_ptr<Environment> GridLake::clone() const { return std::make_unique<GridLake>(*this); }

GridSplit frozenlake_split(const GridLakeConfig& config, int threshold) {
  config.validate();
  GridSplit split;
  const mdp::TupleLayout layout(1, 1);
  for (auto* ds : {&split.train, &split.test}) {
    ds->layout = layout;
    ds->discrete_dims = {true, true, true, true};
  }
  int train_ep = 0;
  int test_ep = 0;
  for (int s = 0; s < config.num_states(); ++s) {
    if (s == config.goal || config.obstacles.contains(s)) continue;
    for (int a = 0; a < kGridActions; ++a) {
      const GridStep g = grid_step(config, s, a);
      mdp::TransitionTuple t;
      t.s = Vector::Constant(1, s);
      t.a = Vector::Constant(1, a);
      t.s_next = Vector::Constant(1, g.next_state);
      t.r = g.reward;
      if (s >= threshold) {
        split.train.push_back(std::move(t), train_ep++);
      } else {
        split.test.push_back(std::move(t), test_ep++);
      }
    }
  }
  return split;
}

}  // namespace moodcrl::env
