#ifndef MOODCRL_FLOW_IO_HPP_
#define MOODCRL_FLOW_IO_HPP_

#include <filesystem>

#include "moodcrl/flow/causal_flow.hpp"
#include "moodcrl/mdp/dataset.hpp"

namespace moodcrl::flow {

struct FlowBundle {
  CausalFlow flow;
  mdp::Normalizer normalizer;
};

// Writes the parameter checkpoint at `path` and a JSON sidecar at
// `path` + ".json" holding the layout, graph hash, flow config and
// normalization statistics.
void save_flow(const std::filesystem::path& path, const CausalFlow& flow,
               const mdp::Normalizer& normalizer);

// Rebuilds the flow for `graph` and loads its parameters. Fails when the
// sidecar's graph hash or layout differs from `graph`. The result is frozen.
FlowBundle load_flow(const std::filesystem::path& path, const mdp::CausalGraph& graph);

std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint);

}  // namespace moodcrl::flow

#endif  // MOODCRL_FLOW_IO_HPP_
