#ifndef MOODCRL_MDP_TUPLE_HPP_
#define MOODCRL_MDP_TUPLE_HPP_

#include "moodcrl/nn/types.hpp"

namespace moodcrl::mdp {

struct BlockRange {
  Index begin = 0;
  Index size = 0;
  Index end() const { return begin + size; }
  bool contains(Index i) const { return i >= begin && i < end(); }
};

// Flattened (s, a, s', r) tuple: contiguous blocks in that order covering [0, d).
class TupleLayout {
 public:
  TupleLayout() = default;
  TupleLayout(Index state_dim, Index action_dim);

  Index state_dim() const { return state_dim_; }
  Index action_dim() const { return action_dim_; }
  Index dim() const { return 2 * state_dim_ + action_dim_ + 1; }

  BlockRange state() const { return {0, state_dim_}; }
  BlockRange action() const { return {state_dim_, action_dim_}; }
  BlockRange next_state() const { return {state_dim_ + action_dim_, state_dim_}; }
  BlockRange reward() const { return {2 * state_dim_ + action_dim_, 1}; }
  Index reward_index() const { return 2 * state_dim_ + action_dim_; }

  // True for dimensions in the s or a block (the "present" of a transition).
  bool is_present(Index i) const { return i < state_dim_ + action_dim_; }

  friend bool operator==(const TupleLayout&, const TupleLayout&) = default;

 private:
  Index state_dim_ = 0;
  Index action_dim_ = 0;
};

struct TransitionTuple {
  Vector s;
  Vector a;
  Vector s_next;
  double r = 0.0;

  bool is_finite() const;
  friend bool operator==(const TransitionTuple& x, const TransitionTuple& y) {
    return x.s == y.s && x.a == y.a && x.s_next == y.s_next && x.r == y.r;
  }
};

Vector flatten(const TransitionTuple& tuple, const TupleLayout& layout);
TransitionTuple unflatten(const Vector& x, const TupleLayout& layout);

}  // namespace moodcrl::mdp

#endif  // MOODCRL_MDP_TUPLE_HPP_
