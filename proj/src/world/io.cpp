#include "moodcrl/world/io.hpp"

#include "../json_util.hpp"
#include "moodcrl/flow/io.hpp"
#include "moodcrl/nn/checkpoint.hpp"

namespace moodcrl::world {
namespace {

detail::ordered_json architecture(Index dim, const std::vector<Index>& hidden,
                                  nn::Activation act) {
  detail::ordered_json meta;
  meta["dim"] = dim;
  meta["hidden"] = hidden;
  meta["activation"] = nn::to_string(act);
  return meta;
}

template <class Config>
Config read_architecture(const std::filesystem::path& path, Index dim) {
  const nlohmann::json meta = detail::read_json_file(flow::sidecar_path(path));
  Config cfg;
  try {
    require(meta.at("dim").get<Index>() == dim,
            "checkpoint " + path.string() + " has a different dimension");
    cfg.hidden = meta.at("hidden").get<std::vector<Index>>();
    cfg.activation = nn::parse_activation(meta.at("activation").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sidecar of " + path.string() + ": " + e.what());
  }
  return cfg;
}

}  // namespace

void save_mapper(const std::filesystem::path& path, const MapperNet& mapper) {
  nn::save_checkpoint(path, mapper.params());
  const auto meta = architecture(mapper.dim(), mapper.config().hidden, mapper.config().activation);
  detail::write_text_file(flow::sidecar_path(path), meta.dump(2) + "\n");
}

MapperNet load_mapper(const std::filesystem::path& path, Index dim) {
  MapperNet mapper(dim, read_architecture<MapperConfig>(path, dim));
  nn::load_checkpoint(path, mapper.params());
  return mapper;
}

void save_baseline(const std::filesystem::path& path, const BaselineDynamicsNet& net) {
  nn::save_checkpoint(path, net.params());
  const auto meta = architecture(net.layout().dim(), net.config().hidden, net.config().activation);
  detail::write_text_file(flow::sidecar_path(path), meta.dump(2) + "\n");
}

BaselineDynamicsNet load_baseline(const std::filesystem::path& path,
                                  const mdp::TupleLayout& layout) {
  BaselineDynamicsNet net(layout, read_architecture<BaselineConfig>(path, layout.dim()));
  nn::load_checkpoint(path, net.params());
  return net;
}

}  // namespace moodcrl::world
