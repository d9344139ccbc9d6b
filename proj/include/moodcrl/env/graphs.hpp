#ifndef MOODCRL_ENV_GRAPHS_HPP_
#define MOODCRL_ENV_GRAPHS_HPP_

#include <memory>
#include <string_view>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/mdp/causal_graph.hpp"

namespace moodcrl::env {

// Block-level Markov structure: s -> a, (s, a) -> s', (s, a) -> r.
mdp::CausalGraph markov_graph(const mdp::TupleLayout& layout);

// Grid world: s -> a, s -> s', a -> s', s -> r, a -> r.
mdp::CausalGraph grid_graph();

// Physics-informed cart-pendulum graph over
// (p, theta, v, omega, force, p', theta', v', omega', r).
mdp::CausalGraph pendulum_graph();

mdp::CausalGraph default_graph(std::string_view env_id);

}  // namespace moodcrl::env

#endif  // MOODCRL_ENV_GRAPHS_HPP_
