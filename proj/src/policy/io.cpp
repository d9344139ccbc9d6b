#include "moodcrl/policy/io.hpp"

#include "../json_util.hpp"
#include "moodcrl/nn/checkpoint.hpp"

namespace moodcrl::policy {

namespace {
std::filesystem::path sidecar(const std::filesystem::path& p) { return p.string() + ".json"; }
}  // namespace

void save_policy(const std::filesystem::path& path, const PolicyNet& policy) {
  nn::save_checkpoint(path, policy.params());
  detail::ordered_json meta;
  meta["head"] = policy.discrete() ? "categorical" : "gaussian";
  meta["state_dim"] = policy.state_dim();
  meta["head_dim"] = policy.discrete() ? Index{policy.num_actions()} : policy.action_dim();
  meta["hidden"] = policy.config().hidden;
  meta["activation"] = nn::to_string(policy.config().activation);
  detail::write_text_file(sidecar(path), meta.dump(2) + "\n");
}

PolicyNet load_policy(const std::filesystem::path& path) {
  const nlohmann::json meta = detail::read_json_file(sidecar(path));
  try {
    PolicyConfig cfg;
    cfg.hidden = meta.at("hidden").get<std::vector<Index>>();
    cfg.activation = nn::parse_activation(meta.at("activation").get<std::string>());
    const auto head = meta.at("head").get<std::string>();
    const auto state_dim = meta.at("state_dim").get<Index>();
    const auto head_dim = meta.at("head_dim").get<Index>();
    require(head == "gaussian" || head == "categorical", "unknown policy head '" + head + "'");
    PolicyNet pi = head == "gaussian"
                       ? PolicyNet::gaussian(state_dim, head_dim, cfg)
                       : PolicyNet::categorical(state_dim, static_cast<int>(head_dim), cfg);
    nn::load_checkpoint(path, pi.params());
    return pi;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("policy sidecar " + sidecar(path).string() + ": " + e.what());
  }
}

}  // namespace moodcrl::policy
