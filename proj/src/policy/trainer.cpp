#include "moodcrl/policy/trainer.hpp"

#include <ostream>

#include "moodcrl/errors.hpp"
#include "moodcrl/policy/evaluate.hpp"

namespace moodcrl::policy {

std::string to_string(Algorithm a) { return a == Algorithm::ppo ? "ppo" : "reinforce"; }

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ppo") return Algorithm::ppo;
  if (name == "reinforce") return Algorithm::reinforce;
  throw ValidationError("unknown algorithm '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(gate_threshold < 0.0, "the gate threshold must be negative");
  require(horizon > 0 && episodes_per_update > 0 && updates >= 0,
          "horizon and episodes per update must be positive");
  require(lr_reinforce > 0.0 && ppo.lr_policy > 0.0 && ppo.lr_value > 0.0,
          "learning rates must be positive");
  require(eval_every > 0 && eval_episodes > 0, "evaluation settings must be positive");
}

TrainResult train_policy(const world::TransitionModel& model, const env::Environment& reference,
                         const std::vector<Vector>& start_states, const TrainConfig& config,
                         std::uint64_t seed) {
  config.validate();
  const auto& spec = reference.spec();
  PolicyConfig net_cfg = config.net;
  net_cfg.seed = seed;
  TrainResult result{spec.discrete_action
                         ? PolicyNet::categorical(spec.state_dim, spec.num_actions, net_cfg)
                         : PolicyNet::gaussian(spec.state_dim, spec.action_dim, net_cfg),
                     {}, {}, 0.0, 0};
  ValueNet value(spec.state_dim, net_cfg);
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  const RolloutConfig rollout{config.gamma, config.horizon, config.gate_threshold,
                              config.episodes_per_update};
  const nn::AdamConfig reinforce_adam{.lr = config.lr_reinforce};
  const std::uint64_t eval_seed = evaluation_seed(seed);

  std::int64_t env_steps = 0;
  for (int u = 1; u <= config.updates; ++u) {
    const RolloutBuffer buffer =
        rollout_world_model(result.policy, model, reference, start_states, rollout, rng);
    env_steps += static_cast<std::int64_t>(buffer.size());
    result.nonfinite_incidents += buffer.nonfinite_incidents();
    MetricsRow row{seed, u, env_steps, buffer.mean_episode_reward(), buffer.gate_truncation_rate(),
                   0.0, 0.0};
    if (!buffer.empty()) {
      const UpdateReport rep =
          config.algorithm == Algorithm::ppo
              ? ppo_update(result.policy, value, buffer, config.ppo, rng)
              : reinforce_update(result.policy, buffer, reinforce_adam);
      row.loss_policy = rep.loss_policy;
      row.loss_value = rep.loss_value;
    }
    result.metrics.push_back(row);
    if (u % config.eval_every == 0 && u != config.updates) {
      const auto ev = evaluate_true_env(result.policy, reference, config.eval_episodes, eval_seed);
      result.curve.push_back({u, ev.mean_return});
    }
  }
  const auto ev = evaluate_true_env(result.policy, reference, config.eval_episodes, eval_seed);
  result.curve.push_back({config.updates, ev.mean_return});
  result.final_return = ev.mean_return;
  return result;
}

void write_metrics_header(std::ostream& out) {
  out << "seed,update,env_steps,mean_return,trunc_rate,loss_policy,loss_value\n";
}

void write_metrics_rows(std::ostream& out, const std::vector<MetricsRow>& rows) {
  const auto old = out.precision(10);
  for (const auto& r : rows) {
    out << r.seed << ',' << r.update << ',' << r.env_steps << ',' << r.mean_return << ','
        << r.trunc_rate << ',' << r.loss_policy << ',' << r.loss_value << '\n';
  }
  out.precision(old);
}

void write_learning_curve(std::ostream& out, const std::vector<std::uint64_t>& seeds,
                          const std::vector<std::vector<CurvePoint>>& curves) {
  require(seeds.size() == curves.size() && !curves.empty(), "learning curve: one curve per seed");
  for (const auto& c : curves) {
    require(c.size() == curves.front().size(), "learning curve: curves differ in length");
  }
  out << "update";
  for (auto s : seeds) out << ",seed_" << s;
  out << '\n';
  const auto old = out.precision(10);
  for (std::size_t i = 0; i < curves.front().size(); ++i) {
    out << curves.front()[i].update;
    for (const auto& c : curves) out << ',' << c[i].eval_return;
    out << '\n';
  }
  out.precision(old);
}

}  // namespace moodcrl::policy
