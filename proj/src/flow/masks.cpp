#include "moodcrl/flow/masks.hpp"

#include "moodcrl/errors.hpp"

namespace moodcrl::flow {

ConditionerMasks mask_from_graph(const mdp::CausalGraph& graph, const std::vector<Index>& hidden) {
  require(!hidden.empty(), "conditioner needs at least one hidden layer");
  const Index d = graph.dim();
  const auto& anc = graph.ancestors();
  auto reaches = [&](Index from, Index to) { return from == to || anc(from, to) != 0; };

  // Only dimensions with descendants can usefully own hidden units.
  std::vector<Index> owners_pool;
  for (Index v : graph.topological_order()) {
    if (anc.row(v).sum() > 0) owners_pool.push_back(v);
  }

  ConditionerMasks masks;
  for (Index width : hidden) {
    require(width > 0, "hidden widths must be positive");
    std::vector<Index> owner(static_cast<std::size_t>(width), -1);
    if (!owners_pool.empty()) {
      for (Index h = 0; h < width; ++h) {
        owner[h] = owners_pool[static_cast<std::size_t>(h) % owners_pool.size()];
      }
    }
    masks.owners.push_back(std::move(owner));
  }

  // input -> first hidden
  {
    const auto& own = masks.owners.front();
    Matrix m = Matrix::Zero(hidden.front(), d);
    for (Index h = 0; h < hidden.front(); ++h) {
      if (own[h] < 0) continue;
      for (Index j = 0; j < d; ++j) m(h, j) = reaches(j, own[h]) ? 1.0 : 0.0;
    }
    masks.layer_masks.push_back(std::move(m));
  }
  // hidden -> hidden
  for (std::size_t l = 1; l < hidden.size(); ++l) {
    const auto& from = masks.owners[l - 1];
    const auto& to = masks.owners[l];
    Matrix m = Matrix::Zero(hidden[l], hidden[l - 1]);
    for (Index h = 0; h < hidden[l]; ++h) {
      if (to[h] < 0) continue;
      for (Index g = 0; g < hidden[l - 1]; ++g) {
        if (from[g] >= 0 && reaches(from[g], to[h])) m(h, g) = 1.0;
      }
    }
    masks.layer_masks.push_back(std::move(m));
  }
  // last hidden -> (shift, log_scale)
  {
    const auto& from = masks.owners.back();
    Matrix m = Matrix::Zero(2 * d, hidden.back());
    for (Index i = 0; i < d; ++i) {
      for (Index g = 0; g < hidden.back(); ++g) {
        if (from[g] >= 0 && anc(from[g], i) != 0) {
          m(i, g) = 1.0;
          m(d + i, g) = 1.0;
        }
      }
    }
    masks.layer_masks.push_back(std::move(m));
  }
  return masks;
}

}  // namespace moodcrl::flow
