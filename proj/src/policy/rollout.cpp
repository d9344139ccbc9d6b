#include "moodcrl/policy/rollout.hpp"

#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::policy {

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "discount must lie in [0, 1]");
  std::vector<double> g(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    if (!std::isfinite(rewards[t])) throw NumericError("discounted_returns: non-finite reward");
    acc = rewards[t] + gamma * acc;
    g[t] = acc;
  }
  return g;
}

RolloutBuffer::RolloutBuffer(double gamma) : gamma_(gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "discount must lie in [0, 1]");
}

void RolloutBuffer::add_episode(std::vector<RolloutStep> steps, EpisodeEnd reason,
                                double dropped_log_prob) {
  EpisodeRecord rec;
  rec.begin = steps_.size();
  rec.end_reason = reason;
  rec.dropped_log_prob = dropped_log_prob;
  std::vector<double> rewards;
  rewards.reserve(steps.size());
  for (const auto& s : steps) rewards.push_back(s.reward);
  const auto g = discounted_returns(rewards, gamma_);
  for (auto& s : steps) {
    rec.total_reward += s.reward;
    steps_.push_back(std::move(s));
  }
  returns_.insert(returns_.end(), g.begin(), g.end());
  rec.end = steps_.size();
  episodes_.push_back(rec);
}

Matrix RolloutBuffer::states() const {
  require(!steps_.empty(), "empty rollout buffer");
  Matrix m(steps_.front().state.size(), static_cast<Index>(steps_.size()));
  for (std::size_t k = 0; k < steps_.size(); ++k) m.col(static_cast<Index>(k)) = steps_[k].state;
  return m;
}

Matrix RolloutBuffer::actions() const {
  require(!steps_.empty(), "empty rollout buffer");
  Matrix m(steps_.front().action.size(), static_cast<Index>(steps_.size()));
  for (std::size_t k = 0; k < steps_.size(); ++k) m.col(static_cast<Index>(k)) = steps_[k].action;
  return m;
}

Vector RolloutBuffer::log_probs() const {
  Vector v(static_cast<Index>(steps_.size()));
  for (std::size_t k = 0; k < steps_.size(); ++k) v[static_cast<Index>(k)] = steps_[k].log_prob;
  return v;
}

Vector RolloutBuffer::returns_vector() const {
  return Eigen::Map<const Vector>(returns_.data(), static_cast<Index>(returns_.size()));
}

double RolloutBuffer::mean_episode_reward() const {
  if (episodes_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : episodes_) total += e.total_reward;
  return total / static_cast<double>(episodes_.size());
}

double RolloutBuffer::gate_truncation_rate() const {
  if (episodes_.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& e : episodes_) {
    n += (e.end_reason == EpisodeEnd::gate || e.end_reason == EpisodeEnd::nonfinite) ? 1 : 0;
  }
  return static_cast<double>(n) / static_cast<double>(episodes_.size());
}

std::size_t RolloutBuffer::nonfinite_incidents() const {
  std::size_t n = 0;
  for (const auto& e : episodes_) n += e.end_reason == EpisodeEnd::nonfinite ? 1 : 0;
  return n;
}

RolloutBuffer rollout_world_model(const PolicyNet& policy, const world::TransitionModel& model,
                                  const env::Environment& semantics,
                                  const std::vector<Vector>& start_states,
                                  const RolloutConfig& config, Rng& rng) {
  require(!start_states.empty(), "rollout: no start states");
  require(config.episodes > 0 && config.horizon > 0, "rollout: episodes and horizon must be positive");
  require(!(config.gate_threshold >= 0.0), "rollout: the gate threshold must be negative");
  const Index s_dim = model.layout().state_dim();
  require(policy.state_dim() == s_dim, "rollout: policy and model state dimensions differ");

  struct Live {
    Vector state;
    std::vector<RolloutStep> steps;
    bool open = true;
  };
  std::uniform_int_distribution<std::size_t> pick(0, start_states.size() - 1);
  std::vector<Live> live(static_cast<std::size_t>(config.episodes));
  for (auto& ep : live) {
    ep.state = start_states[pick(rng)];
    require(ep.state.size() == s_dim, "rollout: start state has the wrong dimension");
  }

  RolloutBuffer buffer(config.gamma);
  std::vector<std::size_t> active;
  for (int t = 0; t < config.horizon; ++t) {
    active.clear();
    for (std::size_t e = 0; e < live.size(); ++e) {
      if (live[e].open) active.push_back(e);
    }
    if (active.empty()) break;
    const auto n = static_cast<Index>(active.size());
    Matrix states(s_dim, n);
    for (Index k = 0; k < n; ++k) states.col(k) = live[active[k]].state;
    Vector logp;
    const Matrix raw_actions = policy.sample(states, rng, logp);
    Matrix applied(semantics.spec().action_dim, n);
    for (Index k = 0; k < n; ++k) applied.col(k) = semantics.bound_action(raw_actions.col(k));
    const world::Prediction pred = model.predict(states, applied);

    for (Index k = 0; k < n; ++k) {
      Live& ep = live[active[k]];
      const double score = pred.log_prob[k];
      const Vector next = pred.next_state.col(k);
      const double reward = pred.reward[k];
      if (!next.allFinite() || !std::isfinite(reward) || std::isnan(score)) {
        buffer.add_episode(std::move(ep.steps), EpisodeEnd::nonfinite);
        ep.open = false;
        continue;
      }
      if (score < config.gate_threshold) {
        buffer.add_episode(std::move(ep.steps), EpisodeEnd::gate, score);
        ep.open = false;
        continue;
      }
      RolloutStep step{ep.state, raw_actions.col(k), logp[k], reward, next, false, false, score};
      step.done = semantics.is_terminal(next);
      const bool last = t + 1 == config.horizon;
      step.truncated = last && !step.done;
      ep.steps.push_back(std::move(step));
      ep.state = next;
      if (ep.steps.back().done || last) {
        const EpisodeEnd reason = ep.steps.back().done ? EpisodeEnd::terminated : EpisodeEnd::horizon;
        buffer.add_episode(std::move(ep.steps), reason);
        ep.open = false;
      }
    }
  }
  return buffer;
}

RolloutBuffer rollout_true_env(const PolicyNet& policy, env::Environment& environment,
                               int episodes, double gamma, Rng& rng) {
  require(episodes > 0, "rollout: episode count must be positive");
  RolloutBuffer buffer(gamma);
  const int horizon = environment.spec().max_steps;
  for (int e = 0; e < episodes; ++e) {
    Vector state = environment.reset(rng);
    std::vector<RolloutStep> steps;
    EpisodeEnd reason = EpisodeEnd::horizon;
    for (int t = 0; t < horizon; ++t) {
      Vector logp;
      const Matrix a = policy.sample(state, rng, logp);
      const env::StepResult r = environment.step(environment.bound_action(a.col(0)));
      steps.push_back({state, a.col(0), logp[0], r.reward, r.next_state, r.done, false,
                       std::numeric_limits<double>::quiet_NaN()});
      state = r.next_state;
      if (r.done) {
        reason = EpisodeEnd::terminated;
        break;
      }
    }
    if (reason == EpisodeEnd::horizon && !steps.empty()) steps.back().truncated = true;
    buffer.add_episode(std::move(steps), reason);
  }
  return buffer;
}

std::size_t rescore_gate(const RolloutBuffer& buffer, double threshold) {
  std::size_t count = 0;
  for (const auto& ep : buffer.episodes()) {
    bool cut = ep.dropped_log_prob < threshold;
    for (std::size_t k = ep.begin; k < ep.end && !cut; ++k) {
      cut = buffer.steps()[k].model_log_prob < threshold;
    }
    count += cut ? 1 : 0;
  }
  return count;
}

}  // namespace moodcrl::policy
