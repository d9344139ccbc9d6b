#ifndef MOODCRL_MDP_CAUSAL_GRAPH_HPP_
#define MOODCRL_MDP_CAUSAL_GRAPH_HPP_

#include <string>
#include <utility>
#include <vector>

#include "moodcrl/mdp/tuple.hpp"

namespace moodcrl::mdp {

// adjacency(j, i) == 1 means dimension j is a causal parent of dimension i.
using Adjacency = Eigen::MatrixXi;
using Edge = std::pair<Index, Index>;

struct DagCheck {
  bool ok = true;
  std::vector<Index> cycle;  // one offending cycle, in edge order, when !ok
};

// Throws ValidationError for non-square or non-binary input.
DagCheck validate_dag(const Adjacency& adjacency);

// Parents before children; ties broken by ascending index. Throws on cycles.
std::vector<Index> topological_permutation(const Adjacency& adjacency);

// Strict transitive ancestors: result(j, i) == 1 iff there is a directed
// path of length >= 1 from j to i.
Adjacency transitive_closure(const Adjacency& adjacency);

Adjacency adjacency_from_edges(Index dim, const std::vector<Edge>& edges);

class CausalGraph {
 public:
  CausalGraph() = default;

  // Rejects cycles, self-edges, and edges from the s'/r blocks into the s/a
  // blocks.
  CausalGraph(TupleLayout layout, Adjacency adjacency, std::vector<std::string> names = {});

  static CausalGraph from_edges(const TupleLayout& layout, const std::vector<Edge>& edges,
                                std::vector<std::string> names = {});
  // A graph over plain variables with no tuple structure (layout() is empty,
  // so has_tuple_layout() is false and no time-ordering check applies).
  static CausalGraph over_variables(Adjacency adjacency, std::vector<std::string> names = {});

  bool has_tuple_layout() const { return layout_.state_dim() > 0; }

  Index dim() const { return adjacency_.rows(); }
  const TupleLayout& layout() const { return layout_; }
  const Adjacency& adjacency() const { return adjacency_; }
  const std::vector<std::string>& names() const { return names_; }

  bool has_edge(Index from, Index to) const { return adjacency_(from, to) != 0; }
  bool is_ancestor(Index from, Index to) const { return ancestors_(from, to) != 0; }
  const Adjacency& ancestors() const { return ancestors_; }

  const std::vector<Index>& topological_order() const { return order_; }
  // position()[i] is the index of dimension i within topological_order().
  const std::vector<Index>& position() const { return position_; }

  // Longest-path depth of every dimension; roots have depth 0.
  const std::vector<Index>& depth() const { return depth_; }
  Index max_depth() const;

  std::vector<Edge> edges() const;

  // Stable hex digest of (dim, edges) used to pair checkpoints with graphs.
  std::string hash() const;

 private:
  void finish_construction();

  TupleLayout layout_;
  Adjacency adjacency_;
  Adjacency ancestors_;
  std::vector<std::string> names_;
  std::vector<Index> order_;
  std::vector<Index> position_;
  std::vector<Index> depth_;
};

}  // namespace moodcrl::mdp

#endif  // MOODCRL_MDP_CAUSAL_GRAPH_HPP_
