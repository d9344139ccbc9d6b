#include "moodcrl/cli/run_config.hpp"

#include <set>

#include "../json_util.hpp"

namespace moodcrl::cli {
namespace {

using nlohmann::json;
using detail::ordered_json;

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ValidationError(where_ + " must be a JSON object");
  }

  template <class T>
  void get(const char* key, T& target) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      target = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(where_ + "." + key + ": " + e.what());
    }
  }

  // Nested object, or nullptr when absent.
  const json* child(const char* key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ValidationError("unknown config key " + where_ + "." + key);
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_activation(ObjectReader& r, const char* key, nn::Activation& act) {
  std::string name = nn::to_string(act);
  r.get(key, name);
  act = nn::parse_activation(name);
}

void read_net(ObjectReader& r, std::vector<Index>& hidden, nn::Activation& act, int& epochs,
              Index& batch, double& lr, double& wd) {
  r.get("hidden", hidden);
  read_activation(r, "activation", act);
  r.get("epochs", epochs);
  r.get("batch_size", batch);
  r.get("lr", lr);
  r.get("weight_decay", wd);
}

ordered_json net_json(const std::vector<Index>& hidden, nn::Activation act, int epochs,
                      Index batch, double lr, double wd) {
  ordered_json j;
  j["hidden"] = hidden;
  j["activation"] = nn::to_string(act);
  j["epochs"] = epochs;
  j["batch_size"] = batch;
  j["lr"] = lr;
  j["weight_decay"] = wd;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  require(env == "pendulum" || env == "gridlake", "env must be 'pendulum' or 'gridlake'");
  grid.validate();
  require(grid_split > 0 && grid_split < grid.num_states(), "grid split threshold out of range");
  require(pendulum.dt > 0.0 && pendulum.max_steps > 0 && pendulum.force_limit > 0.0,
          "invalid pendulum parameters");
  require(data.low_end > 0 && data.low_end < data.medium_end, "data windows must satisfy 0 < low_end < medium_end");
  require(data.behavior_lr > 0.0, "behavior lr must be positive");
  require(flow.num_layers >= 1 && !flow.hidden.empty() && flow.log_scale_bound > 0.0,
          "invalid flow architecture");
  require(flow_train.epochs >= 0 && flow_train.batch_size > 0 && flow_train.lr > 0.0 &&
              flow_train.weight_decay >= 0.0 && flow_train.noise_std >= 0.0,
          "invalid flow training settings");
  require(mapper.epochs >= 0 && mapper.batch_size > 0 && mapper.lr > 0.0 && !mapper.hidden.empty(),
          "invalid mapper settings");
  require(baseline.epochs >= 0 && baseline.batch_size > 0 && baseline.lr > 0.0 &&
              !baseline.hidden.empty(),
          "invalid baseline settings");
  policy.validate();
  require(!seeds.empty(), "at least one seed is required");
  require(!out.empty(), "output directory must not be empty");
}

RunConfig parse_run_config(const json& doc) {
  RunConfig c;
  ObjectReader root(doc, "config");
  root.get("env", c.env);
  root.get("graph_path", c.graph_path);
  root.get("seeds", c.seeds);
  root.get("out", c.out);
  if (const json* g = root.child("grid")) {
    ObjectReader r(*g, root.path("grid"));
    r.get("side", c.grid.side);
    std::vector<int> obstacles(c.grid.obstacles.begin(), c.grid.obstacles.end());
    r.get("obstacles", obstacles);
    c.grid.obstacles = {obstacles.begin(), obstacles.end()};
    r.get("goal", c.grid.goal);
    r.get("start", c.grid.start);
    r.get("max_steps", c.grid.max_steps);
    r.get("split_threshold", c.grid_split);
    r.finish();
  }
  if (const json* p = root.child("pendulum")) {
    ObjectReader r(*p, root.path("pendulum"));
    r.get("cart_mass", c.pendulum.cart_mass);
    r.get("pole_mass", c.pendulum.pole_mass);
    r.get("half_length", c.pendulum.half_length);
    r.get("gravity", c.pendulum.gravity);
    r.get("dt", c.pendulum.dt);
    r.get("force_limit", c.pendulum.force_limit);
    r.get("angle_limit", c.pendulum.angle_limit);
    r.get("max_steps", c.pendulum.max_steps);
    r.get("init_noise", c.pendulum.init_noise);
    r.finish();
  }
  if (const json* d = root.child("data")) {
    ObjectReader r(*d, root.path("data"));
    r.get("low_path", c.data.low_path);
    r.get("medium_path", c.data.medium_path);
    std::string q = mdp::to_string(c.data.quality);
    r.get("quality", q);
    c.data.quality = mdp::parse_quality(q);
    r.get("low_end", c.data.low_end);
    r.get("medium_end", c.data.medium_end);
    r.get("behavior_lr", c.data.behavior_lr);
    r.get("train_subsample", c.data.train_subsample);
    r.finish();
  }
  if (const json* f = root.child("flow")) {
    ObjectReader r(*f, root.path("flow"));
    r.get("num_layers", c.flow.num_layers);
    r.get("hidden", c.flow.hidden);
    read_activation(r, "activation", c.flow.activation);
    r.get("log_scale_bound", c.flow.log_scale_bound);
    r.get("epochs", c.flow_train.epochs);
    r.get("batch_size", c.flow_train.batch_size);
    r.get("lr", c.flow_train.lr);
    r.get("weight_decay", c.flow_train.weight_decay);
    r.get("noise_std", c.flow_train.noise_std);
    r.finish();
  }
  if (const json* m = root.child("mapper")) {
    ObjectReader r(*m, root.path("mapper"));
    read_net(r, c.mapper.hidden, c.mapper.activation, c.mapper.epochs, c.mapper.batch_size,
             c.mapper.lr, c.mapper.weight_decay);
    r.finish();
  }
  if (const json* b = root.child("baseline")) {
    ObjectReader r(*b, root.path("baseline"));
    read_net(r, c.baseline.hidden, c.baseline.activation, c.baseline.epochs,
             c.baseline.batch_size, c.baseline.lr, c.baseline.weight_decay);
    r.finish();
  }
  if (const json* p = root.child("policy")) {
    ObjectReader r(*p, root.path("policy"));
    auto& t = c.policy;
    std::string algo = policy::to_string(t.algorithm);
    r.get("algorithm", algo);
    t.algorithm = policy::parse_algorithm(algo);
    r.get("gamma", t.gamma);
    r.get("horizon", t.horizon);
    r.get("gate_threshold", t.gate_threshold);
    r.get("episodes_per_update", t.episodes_per_update);
    r.get("updates", t.updates);
    r.get("lr_reinforce", t.lr_reinforce);
    r.get("hidden", t.net.hidden);
    read_activation(r, "activation", t.net.activation);
    r.get("init_log_std", t.net.init_log_std);
    r.get("eval_every", t.eval_every);
    r.get("eval_episodes", t.eval_episodes);
    if (const json* ppo = r.child("ppo")) {
      ObjectReader pr(*ppo, r.path("ppo"));
      pr.get("epochs", t.ppo.epochs);
      pr.get("clip", t.ppo.clip);
      pr.get("minibatch", t.ppo.minibatch);
      pr.get("lr_policy", t.ppo.lr_policy);
      pr.get("lr_value", t.ppo.lr_value);
      pr.finish();
    }
    r.finish();
  }
  root.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(detail::read_json_file(path));
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["env"] = c.env;
  j["graph_path"] = c.graph_path;
  j["seeds"] = c.seeds;
  j["out"] = c.out;
  j["grid"] = {{"side", c.grid.side},
               {"obstacles", std::vector<int>(c.grid.obstacles.begin(), c.grid.obstacles.end())},
               {"goal", c.grid.goal},
               {"start", c.grid.start},
               {"max_steps", c.grid.max_steps},
               {"split_threshold", c.grid_split}};
  j["pendulum"] = {{"cart_mass", c.pendulum.cart_mass},     {"pole_mass", c.pendulum.pole_mass},
                   {"half_length", c.pendulum.half_length}, {"gravity", c.pendulum.gravity},
                   {"dt", c.pendulum.dt},                   {"force_limit", c.pendulum.force_limit},
                   {"angle_limit", c.pendulum.angle_limit}, {"max_steps", c.pendulum.max_steps},
                   {"init_noise", c.pendulum.init_noise}};
  j["data"] = {{"low_path", c.data.low_path},
               {"medium_path", c.data.medium_path},
               {"quality", mdp::to_string(c.data.quality)},
               {"low_end", c.data.low_end},
               {"medium_end", c.data.medium_end},
               {"behavior_lr", c.data.behavior_lr},
               {"train_subsample", c.data.train_subsample}};
  j["flow"] = {{"num_layers", c.flow.num_layers},
               {"hidden", c.flow.hidden},
               {"activation", nn::to_string(c.flow.activation)},
               {"log_scale_bound", c.flow.log_scale_bound},
               {"epochs", c.flow_train.epochs},
               {"batch_size", c.flow_train.batch_size},
               {"lr", c.flow_train.lr},
               {"weight_decay", c.flow_train.weight_decay},
               {"noise_std", c.flow_train.noise_std}};
  j["mapper"] = net_json(c.mapper.hidden, c.mapper.activation, c.mapper.epochs,
                         c.mapper.batch_size, c.mapper.lr, c.mapper.weight_decay);
  j["baseline"] = net_json(c.baseline.hidden, c.baseline.activation, c.baseline.epochs,
                           c.baseline.batch_size, c.baseline.lr, c.baseline.weight_decay);
  const auto& t = c.policy;
  j["policy"] = {{"algorithm", policy::to_string(t.algorithm)},
                 {"gamma", t.gamma},
                 {"horizon", t.horizon},
                 {"gate_threshold", t.gate_threshold},
                 {"episodes_per_update", t.episodes_per_update},
                 {"updates", t.updates},
                 {"lr_reinforce", t.lr_reinforce},
                 {"hidden", t.net.hidden},
                 {"activation", nn::to_string(t.net.activation)},
                 {"init_log_std", t.net.init_log_std},
                 {"eval_every", t.eval_every},
                 {"eval_episodes", t.eval_episodes},
                 {"ppo",
                  {{"epochs", t.ppo.epochs},
                   {"clip", t.ppo.clip},
                   {"minibatch", t.ppo.minibatch},
                   {"lr_policy", t.ppo.lr_policy},
                   {"lr_value", t.ppo.lr_value}}}};
  return j;
}

std::unique_ptr<env::Environment> make_environment(const RunConfig& config) {
  if (config.env == "pendulum") return std::make_unique<env::CartPendulum>(config.pendulum);
  if (config.env == "gridlake") return std::make_unique<env::GridLake>(config.grid);
  throw ValidationError("unknown environment '" + config.env + "'");
}

}  // namespace moodcrl::cli
