#include "moodcrl/flow/io.hpp"

#include "../json_util.hpp"
#include "moodcrl/nn/checkpoint.hpp"

namespace moodcrl::flow {

std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint) {
  return checkpoint.string() + ".json";
}

void save_flow(const std::filesystem::path& path, const CausalFlow& flow,
               const mdp::Normalizer& normalizer) {
  require(normalizer.dim() == flow.dim(), "save_flow: normalizer dimension mismatch");
  nn::save_checkpoint(path, flow.params());
  detail::ordered_json meta;
  meta["state_dim"] = flow.graph().layout().state_dim();
  meta["action_dim"] = flow.graph().layout().action_dim();
  meta["graph_hash"] = flow.graph().hash();
  meta["num_layers"] = flow.config().num_layers;
  meta["hidden"] = flow.config().hidden;
  meta["activation"] = nn::to_string(flow.config().activation);
  meta["log_scale_bound"] = flow.config().log_scale_bound;
  meta["normalizer"] = {{"mean", detail::vector_to_json(normalizer.mean)},
                        {"std", detail::vector_to_json(normalizer.std)}};
  detail::write_text_file(sidecar_path(path), meta.dump(2) + "\n");
}

FlowBundle load_flow(const std::filesystem::path& path, const mdp::CausalGraph& graph) {
  const nlohmann::json meta = detail::read_json_file(sidecar_path(path));
  try {
    const mdp::TupleLayout layout(meta.at("state_dim").get<Index>(),
                                  meta.at("action_dim").get<Index>());
    require(layout == graph.layout(), "flow checkpoint " + path.string() +
                                          " was trained for a different tuple layout");
    require(meta.at("graph_hash").get<std::string>() == graph.hash(),
            "flow checkpoint " + path.string() + " was trained with a different causal graph");
    FlowConfig cfg;
    cfg.num_layers = meta.at("num_layers").get<int>();
    cfg.hidden = meta.at("hidden").get<std::vector<Index>>();
    cfg.activation = nn::parse_activation(meta.at("activation").get<std::string>());
    cfg.log_scale_bound = meta.at("log_scale_bound").get<double>();
    mdp::Normalizer norm{detail::vector_from_json(meta.at("normalizer").at("mean"), "mean"),
                         detail::vector_from_json(meta.at("normalizer").at("std"), "std")};
    require(norm.dim() == graph.dim() && norm.std.size() == graph.dim(),
            "flow sidecar: normalizer dimension mismatch");
    FlowBundle bundle{CausalFlow(graph, cfg, 0), std::move(norm)};
    nn::load_checkpoint(path, bundle.flow.params());
    bundle.flow.freeze();
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("flow sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
}

}  // namespace moodcrl::flow
