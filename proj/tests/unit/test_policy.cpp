#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "moodcrl/env/pendulum.hpp"
#include "moodcrl/errors.hpp"
#include "moodcrl/nn/grad_check.hpp"
#include "moodcrl/policy/evaluate.hpp"
#include "moodcrl/policy/io.hpp"
#include "moodcrl/policy/ppo.hpp"
#include "moodcrl/policy/reinforce.hpp"
#include "moodcrl/policy/rollout.hpp"
#include "moodcrl/policy/trainer.hpp"
#include "support.hpp"

namespace moodcrl::policy {
namespace {

using testing::random_matrix;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps the state, pays reward 1 and reports a caller-chosen gate score.
class FakeModel final : public world::TransitionModel {
 public:
  explicit FakeModel(std::function<double()> score) : score_(std::move(score)) {}
  const mdp::TupleLayout& layout() const override { return layout_; }
  world::Prediction predict(const Matrix& states, const Matrix&) const override {
    world::Prediction p{states, Vector::Ones(states.cols()), Vector(states.cols())};
    for (Index k = 0; k < states.cols(); ++k) p.log_prob[k] = score_();
    return p;
  }

 private:
  mdp::TupleLayout layout_{4, 1};
  std::function<double()> score_;
};

std::vector<Vector> upright_starts() { return {Vector::Zero(4)}; }

RolloutConfig short_rollout(double gate) {
  return {.gamma = 0.99, .horizon = 7, .gate_threshold = gate, .episodes = 4};
}

TEST(DiscountedReturns, Examples) {
  EXPECT_NEAR(discounted_returns({1, 1, 1}, 0.99)[0], 2.9701, 1e-12);
  EXPECT_EQ(discounted_returns({3, -1, 2}, 0.0), (std::vector<double>{3, -1, 2}));
  EXPECT_DOUBLE_EQ(discounted_returns(std::vector<double>(10, 1.0), 1.0)[0], 10.0);
  EXPECT_THROW(discounted_returns({1.0, std::nan("")}, 0.9), NumericError);
}

TEST(DiscountedReturns, MatchesBruteForce) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix r = random_matrix(1, 1 + trial, rng);
    std::vector<double> rewards(r.data(), r.data() + r.size());
    const auto g = discounted_returns(rewards, 0.95);
    for (std::size_t t = 0; t < rewards.size(); ++t) {
      double brute = 0.0;
      for (std::size_t k = t; k < rewards.size(); ++k) {
        brute += std::pow(0.95, static_cast<double>(k - t)) * rewards[k];
      }
      EXPECT_NEAR(g[t], brute, 1e-12);
    }
  }
}

TEST(PolicyNet, LogStdIsClamped) {
  PolicyNet pi = PolicyNet::gaussian(4, 1);
  const auto id = pi.params().find("policy.log_std");
  ASSERT_TRUE(id.has_value());
  pi.params().value(*id).setConstant(10.0);
  EXPECT_EQ(pi.log_std()[0], kMaxLogStd);
  pi.params().value(*id).setConstant(-10.0);
  EXPECT_EQ(pi.log_std()[0], kMinLogStd);
}

TEST(PolicyNet, SamplesAreFiniteAndProbabilitiesNormalized) {
  Rng rng(2);
  const PolicyNet g = PolicyNet::gaussian(4, 2);
  Vector lp;
  const Matrix a = g.sample(random_matrix(4, 50, rng), rng, lp);
  EXPECT_TRUE(a.allFinite());
  EXPECT_EQ(a.rows(), 2);
  const PolicyNet c = PolicyNet::categorical(3, 4);
  const Matrix p = c.probabilities(random_matrix(3, 20, rng, 5.0));
  for (Index k = 0; k < p.cols(); ++k) EXPECT_NEAR(p.col(k).sum(), 1.0, 1e-8);
  const Matrix s = random_matrix(3, 30, rng);
  const Matrix acts = c.sample(s, rng, lp);
  EXPECT_LT((c.log_prob(s, acts) - lp).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PolicyNet, ArgmaxIsScaleInvariant) {
  Rng rng(3);
  PolicyNet c = PolicyNet::categorical(3, 4, {.seed = 3});
  const Matrix s = random_matrix(3, 25, rng);
  const Matrix before = c.greedy(s);
  for (const char* name : {"policy.2.weight", "policy.2.bias"}) {
    const auto id = c.params().find(name);
    ASSERT_TRUE(id.has_value()) << name;
    c.params().value(*id) *= 3.7;
  }
  EXPECT_EQ(c.greedy(s), before);
}

TEST(PolicyNet, LogProbGradientMatchesFiniteDifferences) {
  Rng rng(4);
  for (bool discrete : {false, true}) {
    PolicyNet pi = discrete ? PolicyNet::categorical(3, 3) : PolicyNet::gaussian(3, 2);
    testing::randomize(pi.params(), rng, 0.5);
    const Matrix s = random_matrix(3, 6, rng);
    Vector lp;
    const Matrix a = pi.sample(s, rng, lp);
    const Vector w = random_matrix(6, 1, rng).col(0);
    nn::GradStore grads(pi.params());
    pi.log_prob_and_grad(s, a, w, grads);
    auto f = [&](const nn::ParamStore& p) {
      PolicyNet probe = pi;
      probe.params().copy_values_from(p);
      return probe.log_prob(s, a).dot(w);
    };
    const auto report = nn::grad_check(f, pi.params(), grads, 1e-4);
    EXPECT_TRUE(report.passed()) << discrete << " " << report.max_rel_error;
  }
}

TEST(ValueNet, MseGradientMatchesFiniteDifferences) {
  Rng rng(5);
  ValueNet v(3, {});
  testing::randomize(v.params(), rng, 0.5);
  const Matrix s = random_matrix(3, 7, rng);
  const Vector y = random_matrix(7, 1, rng).col(0);
  nn::GradStore grads(v.params());
  v.mse_and_grad(s, y, grads);
  auto f = [&](const nn::ParamStore& p) {
    ValueNet probe = v;
    probe.params().copy_values_from(p);
    return (probe.predict(s) - y).squaredNorm() / 7.0;
  };
  EXPECT_TRUE(nn::grad_check(f, v.params(), grads, 1e-4).passed());
}

// One-state bandit: action 0 pays 1, action 1 pays 0.
RolloutBuffer bandit_batch(const PolicyNet& pi, Rng& rng, int n) {
  RolloutBuffer buf(0.99);
  const Matrix s = Matrix::Ones(1, n);
  Vector lp;
  const Matrix a = pi.sample(s, rng, lp);
  for (int k = 0; k < n; ++k) {
    const double r = a(0, k) == 0.0 ? 1.0 : 0.0;
    buf.add_episode({{s.col(k), a.col(k), lp[k], r, s.col(k), true, false, 0.0}},
                    EpisodeEnd::terminated);
  }
  return buf;
}

double prob_action0(const PolicyNet& pi) { return pi.probabilities(Matrix::Ones(1, 1))(0, 0); }

TEST(Reinforce, BanditProbabilityIncreases) {
  PolicyNet pi = PolicyNet::categorical(1, 2, {.seed = 1});
  Rng rng(6);
  double prev = prob_action0(pi);
  const double start = prev;
  for (int u = 0; u < 30; ++u) {
    reinforce_update(pi, bandit_batch(pi, rng, 32), {.lr = 1e-2});
    const double p = prob_action0(pi);
    EXPECT_GE(p, prev) << "update " << u;
    prev = p;
  }
  EXPECT_GT(prev, start + 0.2);
}

TEST(Reinforce, ZeroAdvantageLeavesParametersUnchanged) {
  PolicyNet pi = PolicyNet::gaussian(2, 1);
  const PolicyNet before = pi;
  RolloutBuffer buf(0.99);
  for (int e = 0; e < 3; ++e) {
    buf.add_episode({{Vector::Constant(2, e), Vector::Constant(1, 0.5), -1.0, 2.0,
                      Vector::Zero(2), true, false, 0.0}},
                    EpisodeEnd::terminated);
  }
  EXPECT_TRUE(standardized_advantages(buf.returns_vector()).isZero());
  const auto rep = reinforce_update(pi, buf, {});
  EXPECT_FALSE(rep.applied);
  for (auto id : pi.params().ids()) EXPECT_EQ(pi.params().value(id), before.params().value(id));
}

TEST(Reinforce, StandardizedAdvantages) {
  const Vector a = standardized_advantages(Vector{{1.0, 2.0, 3.0, 6.0}});
  EXPECT_NEAR(a.mean(), 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(a.squaredNorm() / 4.0), 1.0, 1e-12);
}

TEST(Reinforce, SurrogateGradientOnTwoStepMdp) {
  Rng rng(7);
  PolicyNet pi = PolicyNet::gaussian(2, 1);
  testing::randomize(pi.params(), rng, 0.4);
  RolloutBuffer buf(0.9);
  for (int e = 0; e < 3; ++e) {
    std::vector<RolloutStep> steps;
    for (int t = 0; t < 2; ++t) {
      const Vector s = random_matrix(2, 1, rng).col(0);
      Vector lp;
      const Matrix a = pi.sample(s, rng, lp);
      steps.push_back({s, a.col(0), lp[0], 1.0 + e * t, s, t == 1, false, 0.0});
    }
    buf.add_episode(std::move(steps), EpisodeEnd::terminated);
  }
  const Vector adv = standardized_advantages(buf.returns_vector());
  nn::GradStore grads(pi.params());
  pi.log_prob_and_grad(buf.states(), buf.actions(), -adv / static_cast<double>(adv.size()), grads);
  auto f = [&](const nn::ParamStore& p) {
    PolicyNet probe = pi;
    probe.params().copy_values_from(p);
    return reinforce_surrogate(probe, buf, adv);
  };
  EXPECT_TRUE(nn::grad_check(f, pi.params(), grads, 1e-4).passed());
}

TEST(Ppo, ClippedTermArithmetic) {
  const ClippedTerm up = ppo_clipped_term(std::log(1.5), 2.0, 0.2);
  EXPECT_TRUE(up.clipped);
  EXPECT_NEAR(up.objective, 1.2 * 2.0, 1e-12);
  const ClippedTerm same = ppo_clipped_term(0.0, -0.7, 0.2);
  EXPECT_FALSE(same.clipped);
  EXPECT_DOUBLE_EQ(same.objective, -0.7);
  const ClippedTerm down = ppo_clipped_term(std::log(0.5), -1.0, 0.2);
  EXPECT_TRUE(down.clipped);
  EXPECT_NEAR(down.objective, -0.8, 1e-12);
  EXPECT_TRUE(std::isfinite(ppo_clipped_term(1e6, 1.0, 0.2).objective));
  EXPECT_TRUE(std::isfinite(ppo_clipped_term(-1e6, -1.0, 0.2).objective));
}

TEST(Ppo, ActiveClipKeepsRatioInBand) {
  Rng rng(8);
  std::uniform_real_distribution<double> lr(-3, 3), adv(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    const double log_ratio = lr(rng);
    const double a = adv(rng);
    const ClippedTerm t = ppo_clipped_term(log_ratio, a, 0.2);
    if (t.clipped) {
      const double r = t.objective / a;
      EXPECT_GE(r, 0.8 - 1e-12);
      EXPECT_LE(r, 1.2 + 1e-12);
    }
  }
}

TEST(Ppo, BanditProbabilityIncreases) {
  PolicyNet pi = PolicyNet::categorical(1, 2, {.seed = 2});
  ValueNet v(1, {});
  Rng rng(9);
  const double start = prob_action0(pi);
  PpoConfig cfg;
  cfg.lr_policy = 1e-2;
  double prev = start;
  for (int u = 0; u < 20; ++u) {
    ppo_update(pi, v, bandit_batch(pi, rng, 64), cfg, rng);
    const double p = prob_action0(pi);
    EXPECT_GE(p, prev) << "update " << u;
    prev = p;
  }
  EXPECT_GT(prev, start + 0.2);
}

TEST(RolloutBuffer, StoredReturnsMatchRecomputation) {
  Rng rng(10);
  RolloutBuffer buf(0.97);
  for (int e = 0; e < 4; ++e) {
    std::vector<RolloutStep> steps;
    for (int t = 0; t < 3 + e; ++t) {
      steps.push_back({Vector::Zero(1), Vector::Zero(1), 0.0, random_matrix(1, 1, rng)(0, 0),
                       Vector::Zero(1), false, false, 0.0});
    }
    buf.add_episode(steps, EpisodeEnd::horizon);
  }
  for (const auto& ep : buf.episodes()) {
    std::vector<double> r;
    for (std::size_t k = ep.begin; k < ep.end; ++k) r.push_back(buf.steps()[k].reward);
    const auto g = discounted_returns(r, 0.97);
    for (std::size_t k = ep.begin; k < ep.end; ++k) EXPECT_EQ(buf.returns()[k], g[k - ep.begin]);
  }
}

TEST(Rollout, LowScoreTruncates) {
  const FakeModel model([] { return -50.0; });
  const env::CartPendulum env;
  Rng rng(11);
  const RolloutBuffer buf = rollout_world_model(PolicyNet::gaussian(4, 1), model, env,
                                                upright_starts(), short_rollout(-20), rng);
  EXPECT_EQ(buf.episodes().size(), 4u);
  EXPECT_DOUBLE_EQ(buf.gate_truncation_rate(), 1.0);
  EXPECT_TRUE(buf.empty());
  for (const auto& ep : buf.episodes()) EXPECT_EQ(ep.dropped_log_prob, -50.0);
}

TEST(Rollout, HighScoreRunsToHorizon) {
  const FakeModel model([] { return -5.0; });
  const env::CartPendulum env;
  Rng rng(12);
  const RolloutBuffer buf = rollout_world_model(PolicyNet::gaussian(4, 1), model, env,
                                                upright_starts(), short_rollout(-20), rng);
  EXPECT_EQ(buf.gate_truncation_rate(), 0.0);
  EXPECT_EQ(buf.size(), 28u);
  for (const auto& ep : buf.episodes()) EXPECT_EQ(ep.end_reason, EpisodeEnd::horizon);
  EXPECT_TRUE(buf.steps().back().truncated);
}

TEST(Rollout, InfiniteThresholdNeverTruncates) {
  const FakeModel model([] { return -1e9; });
  const env::CartPendulum env;
  Rng rng(13);
  const RolloutBuffer buf = rollout_world_model(PolicyNet::gaussian(4, 1), model, env,
                                                upright_starts(), short_rollout(-kInf), rng);
  EXPECT_EQ(buf.gate_truncation_rate(), 0.0);
  EXPECT_EQ(rescore_gate(buf, -kInf), 0u);
}

TEST(Rollout, NonFinitePredictionIsAnIncident) {
  const FakeModel model([] { return std::nan(""); });
  const env::CartPendulum env;
  Rng rng(14);
  const RolloutBuffer buf = rollout_world_model(PolicyNet::gaussian(4, 1), model, env,
                                                upright_starts(), short_rollout(-15), rng);
  EXPECT_EQ(buf.nonfinite_incidents(), 4u);
  EXPECT_TRUE(buf.empty());
}

TEST(Rollout, TerminalPredictionsEndEpisodes) {
  const FakeModel model([] { return -1.0; });
  const env::CartPendulum env;
  Rng rng(15);
  const std::vector<Vector> tilted{Vector{{0.0, 0.5, 0.0, 0.0}}};
  const RolloutBuffer buf =
      rollout_world_model(PolicyNet::gaussian(4, 1), model, env, tilted, short_rollout(-15), rng);
  EXPECT_EQ(buf.size(), 4u);
  for (const auto& s : buf.steps()) EXPECT_TRUE(s.done);
}

TEST(Rollout, GateThresholdMustBeNegative) {
  const FakeModel model([] { return -1.0; });
  const env::CartPendulum env;
  Rng rng(16);
  EXPECT_THROW(rollout_world_model(PolicyNet::gaussian(4, 1), model, env, upright_starts(),
                                   short_rollout(0.0), rng),
               ValidationError);
}

TEST(Rollout, RescoringIsMonotoneInThreshold) {
  Rng score_rng(17);
  std::normal_distribution<double> n(-8.0, 4.0);
  const FakeModel model([&] { return n(score_rng); });
  const env::CartPendulum env;
  Rng rng(18);
  const RolloutBuffer buf = rollout_world_model(PolicyNet::gaussian(4, 1), model, env,
                                                upright_starts(), short_rollout(-kInf), rng);
  std::size_t prev = buf.episodes().size() + 1;
  for (double c : {-1.0, -5.0, -10.0, -15.0, -20.0, -kInf}) {
    const std::size_t count = rescore_gate(buf, c);
    EXPECT_LE(count, prev) << c;
    prev = count;
  }
  EXPECT_EQ(prev, 0u);
}

TEST(Evaluate, DeterministicAndPoorBeforeTraining) {
  const PolicyNet pi = PolicyNet::gaussian(4, 1, {.seed = 4});
  const env::CartPendulum env;
  const EvalResult a = evaluate_true_env(pi, env, 5, 21);
  const EvalResult b = evaluate_true_env(pi, env, 5, 21);
  EXPECT_EQ(a.returns, b.returns);
  EXPECT_EQ(a.returns.size(), 5u);
  EXPECT_LT(a.mean_return, 100.0);
  EXPECT_GE(a.std_error, 0.0);
}

TEST(Trainer, MetricsAndCurveShapes) {
  const FakeModel model([] { return -1.0; });
  const env::CartPendulum env;
  TrainConfig cfg;
  cfg.updates = 4;
  cfg.horizon = 10;
  cfg.episodes_per_update = 3;
  cfg.eval_every = 2;
  cfg.eval_episodes = 2;
  for (Algorithm alg : {Algorithm::ppo, Algorithm::reinforce}) {
    cfg.algorithm = alg;
    const TrainResult r = train_policy(model, env, upright_starts(), cfg, 3);
    ASSERT_EQ(r.metrics.size(), 4u);
    ASSERT_EQ(r.curve.size(), 2u);
    EXPECT_EQ(r.curve.back().update, 4);
    EXPECT_EQ(r.curve.back().eval_return, r.final_return);
    for (const auto& m : r.metrics) {
      EXPECT_GE(m.trunc_rate, 0.0);
      EXPECT_LE(m.trunc_rate, 1.0);
    }
    EXPECT_EQ(r.metrics.back().env_steps, 120);
  }
  EXPECT_THROW(parse_algorithm("sac"), ValidationError);
}

TEST(Trainer, CsvLayouts) {
  std::stringstream m;
  write_metrics_header(m);
  write_metrics_rows(m, {{1, 2, 30, 4.5, 0.25, 0.1, 0.2}});
  EXPECT_EQ(m.str().substr(0, m.str().find('\n')),
            "seed,update,env_steps,mean_return,trunc_rate,loss_policy,loss_value");
  std::stringstream c;
  std::vector<std::vector<CurvePoint>> curves(5, {{10, 1.0}, {20, 2.0}});
  write_learning_curve(c, {0, 1, 2, 3, 4}, curves);
  std::string header;
  std::getline(c, header);
  EXPECT_EQ(header, "update,seed_0,seed_1,seed_2,seed_3,seed_4");
}

TEST(PolicyIo, RoundTrip) {
  testing::TempDir dir("policy_io");
  Rng rng(19);
  for (bool discrete : {false, true}) {
    PolicyNet pi = discrete ? PolicyNet::categorical(1, 4) : PolicyNet::gaussian(4, 1);
    testing::randomize(pi.params(), rng, 0.3);
    const auto path = dir.path() / (discrete ? "c.bin" : "g.bin");
    save_policy(path, pi);
    const PolicyNet back = load_policy(path);
    EXPECT_EQ(back.discrete(), discrete);
    const Matrix s = random_matrix(pi.state_dim(), 3, rng);
    EXPECT_EQ(back.head(s), pi.head(s));
  }
}

}  // namespace
}  // namespace moodcrl::policy
