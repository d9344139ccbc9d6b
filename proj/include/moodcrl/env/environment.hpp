#ifndef MOODCRL_ENV_ENVIRONMENT_HPP_
#define MOODCRL_ENV_ENVIRONMENT_HPP_

#include <memory>
#include <string>
#include <vector>

#include "moodcrl/mdp/tuple.hpp"
#include "moodcrl/nn/types.hpp"

namespace moodcrl::env {

struct EnvSpec {
  std::string id;
  Index state_dim = 0;
  Index action_dim = 0;       // length of the applied action vector
  bool discrete_action = false;
  int num_actions = 0;        // discrete only
  int max_steps = 0;          // episode horizon of the true environment
  std::vector<bool> discrete_tuple_dims;  // per (s, a, s', r) dimension

  mdp::TupleLayout layout() const { return {state_dim, action_dim}; }
};

struct StepResult {
  Vector next_state;
  double reward = 0.0;
  bool done = false;
};

// A true (ground-truth) environment. Instances hold the current episode
// state and are cheap to copy through clone().
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(Rng& rng) = 0;
  // `action` is the applied action, i.e. already passed through bound_action.
  virtual StepResult step(const Vector& action) = 0;
  // Maps a raw policy output to the action the environment applies.
  virtual Vector bound_action(const Vector& raw) const = 0;
  // State-based termination, also applied to world-model predictions.
  virtual bool is_terminal(const Vector& next_state) const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace moodcrl::env

#endif  // MOODCRL_ENV_ENVIRONMENT_HPP_
