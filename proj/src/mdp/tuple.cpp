#include "moodcrl/mdp/tuple.hpp"

#include <cmath>
#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::mdp {

TupleLayout::TupleLayout(Index state_dim, Index action_dim)
    : state_dim_(state_dim), action_dim_(action_dim) {
  require(state_dim > 0 && action_dim > 0, "state and action dims must be positive");
}

bool TransitionTuple::is_finite() const {
  return s.allFinite() && a.allFinite() && s_next.allFinite() && std::isfinite(r);
}

Vector flatten(const TransitionTuple& tuple, const TupleLayout& layout) {
  require(tuple.s.size() == layout.state_dim() && tuple.s_next.size() == layout.state_dim() &&
              tuple.a.size() == layout.action_dim(),
          "flatten: tuple dims do not match layout");
  Vector x(layout.dim());
  x.segment(layout.state().begin, layout.state().size) = tuple.s;
  x.segment(layout.action().begin, layout.action().size) = tuple.a;
  x.segment(layout.next_state().begin, layout.next_state().size) = tuple.s_next;
  x[layout.reward_index()] = tuple.r;
  return x;
}

TransitionTuple unflatten(const Vector& x, const TupleLayout& layout) {
  require(x.size() == layout.dim(), "unflatten: vector length " + std::to_string(x.size()) +
                                        " != tuple dim " + std::to_string(layout.dim()));
  TransitionTuple t;
  t.s = x.segment(layout.state().begin, layout.state().size);
  t.a = x.segment(layout.action().begin, layout.action().size);
  t.s_next = x.segment(layout.next_state().begin, layout.next_state().size);
  t.r = x[layout.reward_index()];
  return t;
}

}  // namespace moodcrl::mdp
