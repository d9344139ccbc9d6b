#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moodcrl/cli/commands.hpp"
#include "moodcrl/cli/frozenlake_ood.hpp"
#include "moodcrl/cli/run_config.hpp"
#include "moodcrl/env/behavior.hpp"
#include "moodcrl/env/graphs.hpp"
#include "moodcrl/env/pendulum.hpp"
#include "moodcrl/flow/causal_flow.hpp"
#include "moodcrl/flow/train.hpp"
#include "moodcrl/nn/grad_check.hpp"
#include "moodcrl/policy/policy_net.hpp"
#include "moodcrl/policy/rollout.hpp"
#include "moodcrl/world/baseline.hpp"
#include "moodcrl/world/mapper.hpp"
#include "moodcrl/world/world_model.hpp"
#include "support.hpp"

namespace moodcrl::acceptance {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::random_matrix;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

Vector forward_u(const flow::CausalFlow& f, const Vector& x) { return f.forward(x).u.col(0); }

// 1. inverse(forward(x)) recovers x on pendulum-shaped tuples.
Outcome flow_bijectivity() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    flow::CausalFlow f(env::pendulum_graph(), {}, seed);
    Rng rng(seed);
    testing::randomize(f.params(), rng, 0.15);
    const Matrix x = random_matrix(10, 1000, rng);
    worst = std::max(worst, (f.inverse(f.forward(x).u) - x).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-5, "max |inverse(forward(x)) - x| = " + fmt(worst)};
}

// 2. Analytic log-det against the log-determinant of a numeric Jacobian.
// Relative error uses max(1, |analytic|) as its scale.
Outcome log_det_oracle() {
  double worst = 0.0;
  int instance = 0;
  for (const auto& graph : {env::grid_graph(), env::pendulum_graph()}) {
    for (int k = 0; k < 10; ++k, ++instance) {
      flow::CausalFlow f(graph, {}, instance);
      Rng rng(1000 + instance);
      testing::randomize(f.params(), rng, 0.2);
      const Vector x = random_matrix(graph.dim(), 1, rng).col(0);
      const Matrix jac =
          testing::numeric_jacobian([&](const Vector& v) { return forward_u(f, v); }, x);
      const double numeric = std::log(std::abs(jac.determinant()));
      const double analytic = f.forward(x).log_det[0];
      worst = std::max(worst, std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic)));
    }
  }
  return {worst < 1e-3, "20 parameterizations, max relative error " + fmt(worst)};
}

// 3. u_i never depends on x_j unless j is a causal ancestor of i (or i itself).
Outcome zero_derivatives() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& graph : {env::grid_graph(), env::pendulum_graph()}) {
    const Index d = graph.dim();
    for (int point = 0; point < 50; ++point) {
      flow::CausalFlow f(graph, {}, point);
      Rng rng(2000 + point);
      testing::randomize(f.params(), rng, 0.3);
      const Vector x = random_matrix(d, 1, rng).col(0);
      const Matrix jac =
          testing::numeric_jacobian([&](const Vector& v) { return forward_u(f, v); }, x);
      for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
          if (i == j || graph.is_ancestor(j, i)) continue;
          worst = std::max(worst, std::abs(jac(i, j)));
          ++checked;
        }
      }
    }
  }
  return {worst < 1e-8,
          std::to_string(checked) + " non-ancestor derivatives, max " + fmt(worst)};
}

// 4. Riemann sum of the 2-D density over [-6, 6]^2.
Outcome density_normalization() {
  const auto graph =
      mdp::CausalGraph::over_variables(mdp::adjacency_from_edges(2, {{0, 1}}), {"x1", "x2"});
  constexpr double step = 0.02;
  constexpr int n = 601;
  Matrix grid(2, static_cast<Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      grid(0, static_cast<Index>(i) * n + j) = -6.0 + step * i;
      grid(1, static_cast<Index>(i) * n + j) = -6.0 + step * j;
    }
  }
  std::vector<double> masses;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    flow::CausalFlow f(graph, {}, seed);
    Rng rng(3000 + seed);
    testing::randomize(f.params(), rng, 0.1);
    // Trapezoid weights: edge points count half, corners a quarter.
    const Vector lp = f.log_prob(grid);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        mass += wi * wj * std::exp(lp[static_cast<Index>(i) * n + j]);
      }
    }
    mass *= step * step;
    masses.push_back(mass);
    ok = ok && mass >= 0.98 && mass <= 1.02;
  }
  std::string detail = "mass per instance:";
  for (double m : masses) detail += " " + fmt(m, 6);
  return {ok, detail};
}

Matrix scm_samples(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(2, n);
  for (Index k = 0; k < n; ++k) {
    x(0, k) = normal(rng);
    x(1, k) = 2.0 * x(0, k) + 0.1 * normal(rng);
  }
  return x;
}

// 5. x2 = 2 x1 + 0.1 eps: fitted NLL against the analytic joint-Gaussian value.
Outcome scm_fit() {
  const auto graph =
      mdp::CausalGraph::over_variables(mdp::adjacency_from_edges(2, {{0, 1}}), {"x1", "x2"});
  const double analytic = std::log(2.0 * std::numbers::pi) + 1.0 + std::log(0.1);
  flow::CausalFlow f(graph, {}, 5);
  flow::FlowTrainConfig cfg;
  cfg.epochs = 150;
  cfg.lr = 1e-3;
  cfg.seed = 5;
  const auto res = flow::train_nll(f, scm_samples(10000, 11), cfg);
  const double held_out = f.nll(scm_samples(10000, 12));
  const double gap = std::abs(held_out - analytic);
  return {gap < 0.1, "held-out NLL " + fmt(held_out) + " vs analytic " + fmt(analytic) +
                         " (train " + fmt(res.final_nll) + ")"};
}

fs::path config_file(const char* name) {
  return fs::path(MOODCRL_SOURCE_DIR) / "configs" / name;
}

// 6. FrozenLake out-of-distribution generalization against the regression baseline.
Outcome frozenlake_ood() {
  const cli::RunConfig config = cli::load_run_config(config_file("gridlake.json"));
  int cnf_better = 0;
  bool below_one = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const cli::OodSeedResult r = cli::run_frozenlake_ood(config, seed);
    const auto& s = r.summary;
    cnf_better += s.cnf_ood_lrd < s.mlp_ood_lrd ? 1 : 0;
    below_one = below_one && s.cnf_ood_lrd < 1.0;
    detail << " [seed " << seed << ": cnf " << fmt(s.cnf_ood_lrd) << " mlp " << fmt(s.mlp_ood_lrd)
           << ", top-row Up cnf " << fmt(s.cnf_top_row_up) << " mlp " << fmt(s.mlp_top_row_up)
           << "]";
    std::cout << "  frozenlake seed " << seed << ": test L/R/D L1 cnf " << s.cnf_ood_lrd
              << ", mlp " << s.mlp_ood_lrd << "\n"
              << std::flush;
  }
  return {cnf_better >= 4 && below_one,
          "cnf better on " + std::to_string(cnf_better) + "/5 seeds, all cnf < 1: " +
              (below_one ? "yes" : "no") + ";" + detail.str()};
}

// 7. Re-scoring one recorded world-model rollout at decreasing thresholds.
Outcome gate_monotonicity() {
  const env::CartPendulum environment;
  env::BehaviorConfig behavior;
  const mdp::Dataset ds = env::generate_behavior_dataset(environment, 0, 100, behavior);
  const mdp::Normalizer norm = mdp::fit_normalizer(ds);
  const Matrix x = norm.normalize(ds.to_matrix());
  const auto graph = env::pendulum_graph();
  flow::CausalFlow f(graph, {}, 0);
  flow::FlowTrainConfig fcfg;
  fcfg.epochs = 20;
  fcfg.lr = 1e-3;
  fcfg.noise_std = 0.01;
  flow::train_nll(f, x, fcfg);
  f.freeze();
  world::MapperConfig mcfg;
  mcfg.hidden = {64, 64};
  mcfg.epochs = 20;
  mcfg.lr = 1e-3;
  world::MapperNet mapper(graph.dim(), mcfg);
  world::train_mapper(mapper, f, x, world::perturb_normalized(x, graph.layout(), norm));
  const world::WorldModel model(f, mapper, norm);

  std::vector<Vector> starts;
  for (std::size_t b : ds.episode_boundaries()) starts.push_back(ds.tuples[b].s);
  Rng rng(7);
  const policy::RolloutConfig rcfg{.gamma = 0.99,
                                   .horizon = 200,
                                   .gate_threshold = -std::numeric_limits<double>::infinity(),
                                   .episodes = 20};
  const policy::RolloutBuffer buffer = policy::rollout_world_model(
      policy::PolicyNet::gaussian(4, 1, {.seed = 7}), model, environment, starts, rcfg, rng);

  const std::vector<double> thresholds{-5, -10, -15, -20, -std::numeric_limits<double>::infinity()};
  std::vector<std::size_t> counts;
  for (double c : thresholds) counts.push_back(policy::rescore_gate(buffer, c));
  bool ok = counts.back() == 0;
  for (std::size_t k = 1; k < counts.size(); ++k) ok = ok && counts[k] <= counts[k - 1];
  std::string detail = std::to_string(buffer.episodes().size()) + " episodes, " +
                       std::to_string(buffer.size()) + " steps; counts at -5/-10/-15/-20/-inf:";
  for (std::size_t n : counts) detail += " " + std::to_string(n);
  return {ok, detail};
}

// Pendulum pipeline runs shared by criteria 8 and 9.
struct PendulumRun {
  double dataset_top10 = 0.0;
  std::map<std::string, double> final_returns;
};

fs::path acceptance_root() {
  const char* env_dir = std::getenv("MOODCRL_ACCEPTANCE_DIR");
  return fs::absolute(env_dir != nullptr ? fs::path(env_dir) : fs::path("acceptance_runs"));
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

cli::Invocation invocation(const std::string& command, const json& doc, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path path = dir / "config.json";
  std::ofstream(path) << doc.dump(2) << "\n";
  return {command, path, cli::load_run_config(path)};
}

PendulumRun run_pendulum(mdp::Quality quality) {
  const fs::path root = acceptance_root();
  json doc = read_json(config_file("pendulum.json"));
  const fs::path low_out = root / "pendulum_low";
  if (quality == mdp::Quality::low) {
    doc["out"] = low_out.string();
    cli::cmd_gen_data(invocation("gen-data", doc, low_out), std::cout);
  } else {
    doc["out"] = (root / "pendulum_medium").string();
    doc["data"]["low_path"] = (low_out / "data" / "low.jsonl").string();
    doc["data"]["medium_path"] = (low_out / "data" / "medium.jsonl").string();
  }
  doc["data"]["quality"] = mdp::to_string(quality);
  const fs::path out = doc["out"].get<std::string>();
  cli::cmd_train_model(invocation("train-model", doc, out), std::cout);
  cli::cmd_train_policy(invocation("train-policy", doc, out), std::cout);
  const json summary = read_json(out / "policy" / "summary.json");
  PendulumRun run;
  run.dataset_top10 = summary["dataset_top10_return"].get<double>();
  for (const auto& [seed, entry] : summary["seeds"].items()) {
    run.final_returns[seed] = entry["final_return"].get<double>();
  }
  return run;
}

std::optional<PendulumRun> low_run;

const PendulumRun& low_quality_run() {
  if (!low_run) low_run = run_pendulum(mdp::Quality::low);
  return *low_run;
}

// 8. Offline PPO on low-quality data beats the dataset's top-10% return.
Outcome pendulum_low_quality() {
  const PendulumRun& run = low_quality_run();
  int beats = 0;
  std::string detail;
  for (const auto& [seed, ret] : run.final_returns) {
    beats += ret > run.dataset_top10 ? 1 : 0;
    detail += " " + seed + ":" + fmt(ret);
  }
  return {beats >= 3, std::to_string(beats) + "/" + std::to_string(run.final_returns.size()) +
                          " seeds above dataset top-10% " + fmt(run.dataset_top10) +
                          "; final returns" + detail};
}

// 9. Medium-quality data does at least as well as low-quality data.
Outcome quality_ablation() {
  const PendulumRun& low = low_quality_run();
  const PendulumRun medium = run_pendulum(mdp::Quality::medium);
  int at_least = 0;
  std::string detail;
  for (const auto& [seed, ret] : medium.final_returns) {
    const double base = low.final_returns.at(seed);
    at_least += ret >= base ? 1 : 0;
    detail += " " + seed + ":" + fmt(ret) + "/" + fmt(base);
  }
  return {at_least >= 3, std::to_string(at_least) + "/" +
                             std::to_string(medium.final_returns.size()) +
                             " seeds medium >= low; medium/low" + detail};
}

struct GradSuite {
  double worst = 0.0;
  std::string worst_name;
  int instances = 0;
  void record(const std::string& name, const nn::GradCheckReport& r) {
    ++instances;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_name = name;
    }
  }
};

// 10. Finite-difference checks of every trained loss.
Outcome gradient_suite() {
  constexpr double tol = 1e-4;
  std::map<std::string, GradSuite> suites;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(4000 + seed);

    {
      nn::ParamStore store;
      nn::DenseStack net(store, "net",
                         nn::DenseStack::mlp_specs(6, {8}, 3, nn::Activation::leaky_relu), rng);
      const Matrix x = random_matrix(6, 5, rng);
      const Matrix y = random_matrix(3, 5, rng);
      nn::DenseTape tape;
      const Matrix out = net.forward(store, x, tape);
      nn::GradStore grads(store);
      net.backward(store, tape, out - y, grads);
      auto loss = [&](const nn::ParamStore& p) { return 0.5 * (net.forward(p, x) - y).squaredNorm(); };
      suites["dense"].record("dense", nn::grad_check(loss, store, grads, tol));
    }
    {
      const auto graph = seed % 2 == 0 ? env::grid_graph() : env::pendulum_graph();
      flow::CausalFlow f(graph, {2, {8, 8}, nn::Activation::elu, 7.0}, seed);
      testing::randomize(f.params(), rng, 0.3);
      const Matrix x = random_matrix(graph.dim(), 5, rng);
      nn::GradStore grads(f.params());
      f.nll_and_grad(x, grads);
      auto loss = [&](const nn::ParamStore& p) {
        flow::CausalFlow probe = f;
        probe.params().copy_values_from(p);
        return probe.nll(x);
      };
      suites["flow_nll"].record("flow_nll", nn::grad_check(loss, f.params(), grads, tol));
    }
    {
      world::MapperConfig cfg;
      cfg.hidden = {8, 8};
      cfg.seed = seed;
      world::MapperNet g(4, cfg);
      testing::randomize(g.params(), rng, 0.3);
      const Matrix up = random_matrix(4, 6, rng);
      Matrix ut = random_matrix(4, 6, rng);
      const Matrix res = ut - g.forward(up);
      for (Index k = 0; k < res.size(); ++k) {
        if (std::abs(res.data()[k]) < 1e-2) ut.data()[k] += 0.05;
      }
      nn::GradStore grads(g.params());
      g.l1_loss_and_grad(up, ut, grads);
      auto loss = [&](const nn::ParamStore& p) {
        world::MapperNet probe = g;
        probe.params().copy_values_from(p);
        return probe.l1_loss(up, ut);
      };
      suites["mapper_l1"].record("mapper_l1", nn::grad_check(loss, g.params(), grads, tol));
    }
    {
      world::BaselineConfig cfg;
      cfg.hidden = {8, 8};
      cfg.seed = seed;
      world::BaselineDynamicsNet net(mdp::TupleLayout(4, 1), cfg);
      testing::randomize(net.params(), rng, 0.3);
      const Matrix in = random_matrix(5, 6, rng);
      const Matrix target = random_matrix(5, 6, rng);
      nn::GradStore grads(net.params());
      net.l2_loss_and_grad(in, target, grads);
      auto loss = [&](const nn::ParamStore& p) {
        world::BaselineDynamicsNet probe = net;
        probe.params().copy_values_from(p);
        return probe.l2_loss(in, target);
      };
      suites["baseline_l2"].record("baseline_l2", nn::grad_check(loss, net.params(), grads, tol));
    }
    {
      const bool discrete = seed % 2 == 1;
      policy::PolicyConfig pc;
      pc.hidden = {8, 8};
      pc.seed = seed;
      policy::PolicyNet pi =
          discrete ? policy::PolicyNet::categorical(3, 3, pc) : policy::PolicyNet::gaussian(3, 2, pc);
      testing::randomize(pi.params(), rng, 0.5);
      const Matrix s = random_matrix(3, 6, rng);
      Vector lp;
      const Matrix a = pi.sample(s, rng, lp);
      const Vector adv = random_matrix(6, 1, rng).col(0);
      // REINFORCE surrogate -mean(log pi * A).
      const Vector w = -adv / 6.0;
      nn::GradStore grads(pi.params());
      pi.log_prob_and_grad(s, a, w, grads);
      auto loss = [&](const nn::ParamStore& p) {
        policy::PolicyNet probe = pi;
        probe.params().copy_values_from(p);
        return probe.log_prob(s, a).dot(w);
      };
      suites["policy_surrogate"].record("policy_surrogate",
                                        nn::grad_check(loss, pi.params(), grads, tol));
    }
    {
      policy::PolicyConfig pc;
      pc.hidden = {8, 8};
      pc.seed = seed;
      policy::ValueNet v(3, pc);
      testing::randomize(v.params(), rng, 0.5);
      const Matrix s = random_matrix(3, 7, rng);
      const Vector y = random_matrix(7, 1, rng).col(0);
      nn::GradStore grads(v.params());
      v.mse_and_grad(s, y, grads);
      auto loss = [&](const nn::ParamStore& p) {
        policy::ValueNet probe = v;
        probe.params().copy_values_from(p);
        return (probe.predict(s) - y).squaredNorm() / 7.0;
      };
      suites["value_mse"].record("value_mse", nn::grad_check(loss, v.params(), grads, tol));
    }
  }
  bool ok = true;
  std::string detail;
  for (const auto& [name, suite] : suites) {
    ok = ok && suite.worst < tol;
    detail += " " + name + "(" + std::to_string(suite.instances) + ")=" + fmt(suite.worst, 3);
  }
  return {ok, "max relative error per loss:" + detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace moodcrl::acceptance

int main(int argc, char** argv) {
  using namespace moodcrl::acceptance;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only.push_back(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: moodcrl_acceptance [--only N]...\n";
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "flow bijectivity", flow_bijectivity},
      {2, "log-det oracle", log_det_oracle},
      {3, "causal-mask zero derivatives", zero_derivatives},
      {4, "density normalization", density_normalization},
      {5, "synthetic SCM fit", scm_fit},
      {6, "FrozenLake OOD", frozenlake_ood},
      {7, "gate monotonicity", gate_monotonicity},
      {8, "pendulum low-quality PPO", pendulum_low_quality},
      {9, "medium vs low quality", quality_ablation},
      {10, "gradient-check suite", gradient_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += outcome.passed ? 0 : 1;
    std::cout << "criterion " << c.id << " (" << c.name << "): "
              << (outcome.passed ? "PASS" : "FAIL") << " [" << std::fixed << std::setprecision(1)
              << seconds << " s] " << std::defaultfloat << outcome.detail << "\n"
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
