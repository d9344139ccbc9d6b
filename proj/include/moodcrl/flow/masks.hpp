#ifndef MOODCRL_FLOW_MASKS_HPP_
#define MOODCRL_FLOW_MASKS_HPP_

#include <vector>

#include "moodcrl/mdp/causal_graph.hpp"

namespace moodcrl::flow {

// Masks of one conditioner network: d -> hidden... -> 2d, where output row i
// is the shift of dimension i and row d + i its log-scale.
//
// Every hidden unit is owned by a tuple dimension (its "degree"), assigned
// round-robin in topological order over the dimensions that have at least one
// descendant. A connection from a unit owned by j to a hidden unit owned by k
// exists iff j == k or j is an ancestor of k; to the outputs of dimension i
// iff j is a strict ancestor of i. Any path from input j to output i therefore
// implies j is a strict ancestor of i.
struct ConditionerMasks {
  std::vector<Matrix> layer_masks;          // one per dense layer, out x in
  std::vector<std::vector<Index>> owners;   // hidden unit owners per hidden layer (-1: unowned)
};

ConditionerMasks mask_from_graph(const mdp::CausalGraph& graph, const std::vector<Index>& hidden);

}  // namespace moodcrl::flow

#endif  // MOODCRL_FLOW_MASKS_HPP_
