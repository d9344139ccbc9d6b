#ifndef MOODCRL_WORLD_TRANSITION_MODEL_HPP_
#define MOODCRL_WORLD_TRANSITION_MODEL_HPP_

#include "moodcrl/mdp/tuple.hpp"

namespace moodcrl::world {

// Batched one-step prediction; column k of every field belongs to query k.
struct Prediction {
  Matrix next_state;  // |S| x B, raw units
  Vector reward;      // B, raw units
  Vector log_prob;    // B, model log-likelihood of the assembled tuple
};

// A learned (or fake) simulator that policies are trained against.
class TransitionModel {
 public:
  virtual ~TransitionModel() = default;
  virtual const mdp::TupleLayout& layout() const = 0;
  // states: |S| x B, actions: |A| x B (raw units). Queries whose prediction
  // fails numerically come back with non-finite entries.
  virtual Prediction predict(const Matrix& states, const Matrix& actions) const = 0;
};

}  // namespace moodcrl::world

#endif  // MOODCRL_WORLD_TRANSITION_MODEL_HPP_
