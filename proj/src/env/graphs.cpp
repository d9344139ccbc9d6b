#include "moodcrl/env/graphs.hpp"

#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::env {

mdp::CausalGraph markov_graph(const mdp::TupleLayout& layout) {
  std::vector<mdp::Edge> edges;
  const auto s = layout.state();
  const auto a = layout.action();
  const auto sn = layout.next_state();
  const Index r = layout.reward_index();
  for (Index i = s.begin; i < s.end(); ++i) {
    for (Index j = a.begin; j < a.end(); ++j) edges.emplace_back(i, j);
  }
  for (Index to = sn.begin; to < sn.end(); ++to) {
    for (Index from = 0; from < a.end(); ++from) edges.emplace_back(from, to);
  }
  for (Index from = 0; from < a.end(); ++from) edges.emplace_back(from, r);
  return mdp::CausalGraph::from_edges(layout, edges);
}

mdp::CausalGraph grid_graph() {
  return mdp::CausalGraph::from_edges(mdp::TupleLayout(1, 1),
                                      {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}},
                                      {"s", "a", "s_next", "r"});
}

mdp::CausalGraph pendulum_graph() {
  enum : Index { p, th, v, om, f, pn, thn, vn, omn, r };
  const std::vector<mdp::Edge> edges = {
      // the policy reads the full state
      {p, f}, {th, f}, {v, f}, {om, f},
      // accelerations depend on angle, angular velocity and force
      {v, vn}, {th, vn}, {om, vn}, {f, vn},
      {om, omn}, {th, omn}, {f, omn},
      // positions integrate the updated velocities
      {p, pn}, {vn, pn},
      {th, thn}, {omn, thn},
      // survival reward depends on the new angle
      {thn, r},
  };
  return mdp::CausalGraph::from_edges(
      mdp::TupleLayout(4, 1), edges,
      {"p", "theta", "v", "omega", "force", "p_next", "theta_next", "v_next", "omega_next", "r"});
}

mdp::CausalGraph default_graph(std::string_view env_id) {
  if (env_id == "pendulum") return pendulum_graph();
  if (env_id == "gridlake") return grid_graph();
  throw ValidationError("no default causal graph for environment '" + std::string(env_id) + "'");
}

}  // namespace moodcrl::env
