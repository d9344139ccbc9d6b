#include "moodcrl/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "../json_util.hpp"
#include "moodcrl/cli/frozenlake_ood.hpp"
#include "moodcrl/cli/hash.hpp"
#include "moodcrl/env/behavior.hpp"
#include "moodcrl/env/graphs.hpp"
#include "moodcrl/flow/io.hpp"
#include "moodcrl/mdp/io.hpp"
#include "moodcrl/policy/evaluate.hpp"
#include "moodcrl/policy/io.hpp"
#include "moodcrl/world/io.hpp"
#include "moodcrl/world/world_model.hpp"

namespace moodcrl::cli {
namespace {

namespace fs = std::filesystem;
using detail::ordered_json;

fs::path phase_dir(const RunConfig& c, const char* name) {
  const fs::path dir = fs::path(c.out) / name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

fs::path dataset_path(const RunConfig& c, mdp::Quality q) {
  const std::string& explicit_path = q == mdp::Quality::medium ? c.data.medium_path : c.data.low_path;
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(c.out) / "data" / (q == mdp::Quality::medium ? "medium.jsonl" : "low.jsonl");
}

fs::path seed_model_dir(const RunConfig& c, std::uint64_t seed) {
  return fs::path(c.out) / "model" / ("seed_" + std::to_string(seed));
}

fs::path policy_path(const RunConfig& c, std::uint64_t seed) {
  return fs::path(c.out) / "policy" / ("policy_seed_" + std::to_string(seed) + ".bin");
}

void require_file(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw ValidationError(p.string() + " not found; " + hint);
}

mdp::CausalGraph load_causal_graph(const RunConfig& c, const mdp::TupleLayout& layout) {
  if (c.graph_path.empty()) {
    mdp::CausalGraph g = env::default_graph(c.env);
    require(g.layout() == layout, "the default graph does not match the dataset layout");
    return g;
  }
  return mdp::load_graph(c.graph_path, layout);
}

// resolved_config.json + input_hashes.json for one phase.
void write_phase_meta(const fs::path& dir, const Invocation& inv,
                      const std::vector<fs::path>& inputs) {
  ordered_json resolved = to_json(inv.config);
  resolved["command"] = inv.command;
  detail::write_text_file(dir / "resolved_config.json", resolved.dump(2) + "\n");
  ordered_json hashes = ordered_json::array();
  std::vector<fs::path> all{inv.config_path};
  all.insert(all.end(), inputs.begin(), inputs.end());
  for (const auto& p : all) {
    if (p.empty() || !fs::exists(p)) continue;
    hashes.push_back({{"path", p.string()}, {"git_blob_sha1", git_blob_hash_file(p)}});
  }
  detail::write_text_file(dir / "input_hashes.json", hashes.dump(2) + "\n");
}

ordered_json return_stats(const std::vector<double>& returns) {
  ordered_json j;
  j["episodes"] = returns.size();
  if (returns.empty()) return j;
  double sum = 0.0;
  for (double r : returns) sum += r;
  j["mean"] = sum / static_cast<double>(returns.size());
  j["quantiles"] = {{"0.00", mdp::quantile(returns, 0.0)}, {"0.25", mdp::quantile(returns, 0.25)},
                    {"0.50", mdp::quantile(returns, 0.5)}, {"0.75", mdp::quantile(returns, 0.75)},
                    {"0.90", mdp::quantile(returns, 0.9)}, {"1.00", mdp::quantile(returns, 1.0)}};
  j["top10_return"] = mdp::top_fraction_mean(returns);
  return j;
}

Vector dequant_widths(const mdp::Dataset& ds, const mdp::Normalizer& norm) {
  Vector w = Vector::Zero(ds.layout.dim());
  for (Index i = 0; i < w.size(); ++i) {
    if (ds.is_discrete(i)) w[i] = 0.5 / norm.std[i];
  }
  return w;
}

std::vector<Vector> episode_start_states(const mdp::Dataset& ds) {
  std::vector<Vector> starts;
  for (std::size_t b : ds.episode_boundaries()) starts.push_back(ds.tuples[b].s);
  return starts;
}

mdp::Dataset load_training_dataset(const Invocation& inv, fs::path& path) {
  path = dataset_path(inv.config, inv.config.data.quality);
  require_file(path, "run gen-data first or set data." +
                         std::string(inv.config.data.quality == mdp::Quality::medium ? "medium_path"
                                                                                      : "low_path"));
  mdp::Dataset ds = mdp::load_dataset(path);
  if (ds.discrete_dims.empty()) {
    ds.discrete_dims = make_environment(inv.config)->spec().discrete_tuple_dims;
  }
  return ds;
}

}  // namespace

void cmd_gen_data(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  const fs::path dir = phase_dir(c, "data");
  const auto environment = make_environment(c);
  env::BehaviorConfig bc;
  bc.lr = c.data.behavior_lr;
  bc.gamma = c.policy.gamma;
  bc.net = c.policy.net;
  bc.seed = c.seeds.front();
  log << "gen-data: " << c.data.medium_end << " REINFORCE episodes in " << c.env << "\n";
  const env::QualityDatasets q =
      env::generate_quality_datasets(*environment, bc, c.data.low_end, c.data.medium_end);
  const fs::path low = dir / "low.jsonl";
  const fs::path medium = dir / "medium.jsonl";
  mdp::save_dataset(low, q.low);
  mdp::save_dataset(medium, q.medium);

  ordered_json summary;
  summary["env"] = c.env;
  summary["seed"] = bc.seed;
  summary["low"] = {{"path", low.string()},
                    {"episode_window", {0, c.data.low_end}},
                    {"tuples", q.low.size()},
                    {"returns", return_stats(q.low_returns)}};
  summary["medium"] = {{"path", medium.string()},
                       {"episode_window", {c.data.low_end, c.data.medium_end}},
                       {"tuples", q.medium.size()},
                       {"resampled_with_replacement", q.medium_resampled},
                       {"returns", return_stats(q.medium_returns)}};
  summary["top10_return"] = mdp::top_fraction_mean(q.low_returns);
  detail::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  write_phase_meta(dir, inv, {});
  log << "gen-data: low " << q.low.size() << " tuples, medium " << q.medium.size()
      << " tuples, low top-10% return " << mdp::top_fraction_mean(q.low_returns) << "\n";
}

void cmd_train_model(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  fs::path data_path;
  const mdp::Dataset full = load_training_dataset(inv, data_path);
  const mdp::CausalGraph graph = load_causal_graph(c, full.layout);
  const fs::path dir = phase_dir(c, "model");
  ordered_json summary = ordered_json::object();
  for (std::uint64_t seed : c.seeds) {
    const fs::path seed_dir = seed_model_dir(c, seed);
    fs::create_directories(seed_dir);
    mdp::Dataset ds = full;
    if (c.data.train_subsample > 0 && c.data.train_subsample < full.size()) {
      bool replaced = false;
      ds = env::subsample(full, c.data.train_subsample, seed, replaced);
    }
    const mdp::Normalizer norm = mdp::fit_normalizer(ds);
    const Matrix x = norm.normalize(ds.to_matrix());

    flow::CausalFlow flow(graph, c.flow, seed);
    flow::FlowTrainConfig ftc = c.flow_train;
    ftc.seed = seed;
    log << "train-model seed " << seed << ": flow on " << x.cols() << " tuples, " << ftc.epochs
        << " epochs\n";
    const auto fr = flow::train_nll(flow, x, ftc, dequant_widths(ds, norm));
    flow.freeze();
    flow::save_flow(seed_dir / "flow.bin", flow, norm);
    {
      std::ofstream out(seed_dir / "flow_loss.csv");
      out << "epoch,nll\n0," << fr.initial_nll << "\n";
      for (std::size_t e = 0; e < fr.epoch_nll.size(); ++e) out << e + 1 << ',' << fr.epoch_nll[e] << '\n';
    }

    world::MapperConfig mc = c.mapper;
    mc.seed = seed;
    world::MapperNet mapper(graph.dim(), mc);
    log << "train-model seed " << seed << ": mapper, " << mc.epochs << " epochs\n";
    const auto mr =
        world::train_mapper(mapper, flow, x, world::perturb_normalized(x, graph.layout(), norm));
    world::save_mapper(seed_dir / "mapper.bin", mapper);
    {
      std::ofstream out(seed_dir / "mapper_loss.csv");
      out << "epoch,l1\n0," << mr.initial_loss << "\n";
      for (std::size_t e = 0; e < mr.epoch_loss.size(); ++e) out << e + 1 << ',' << mr.epoch_loss[e] << '\n';
    }
    summary[std::to_string(seed)] = {{"tuples", x.cols()},
                                     {"flow_initial_nll", fr.initial_nll},
                                     {"flow_final_nll", fr.final_nll},
                                     {"mapper_initial_l1", mr.initial_loss},
                                     {"mapper_final_l1", mr.final_loss}};
    log << "train-model seed " << seed << ": nll " << fr.final_nll << ", mapper L1 " << mr.final_loss
        << "\n";
  }
  detail::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  std::vector<fs::path> inputs{data_path};
  if (!c.graph_path.empty()) inputs.emplace_back(c.graph_path);
  write_phase_meta(dir, inv, inputs);
}

void cmd_train_policy(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  for (std::uint64_t seed : c.seeds) {
    require_file(seed_model_dir(c, seed) / "flow.bin", "run train-model first");
    require_file(seed_model_dir(c, seed) / "mapper.bin", "run train-model first");
  }
  fs::path data_path;
  const mdp::Dataset ds = load_training_dataset(inv, data_path);
  const mdp::CausalGraph graph = load_causal_graph(c, ds.layout);
  const auto environment = make_environment(c);
  const std::vector<Vector> starts = episode_start_states(ds);
  const fs::path dir = phase_dir(c, "policy");

  std::ofstream metrics(dir / "metrics.csv");
  policy::write_metrics_header(metrics);
  std::vector<std::vector<policy::CurvePoint>> curves;
  ordered_json finals = ordered_json::object();
  std::vector<fs::path> inputs{data_path};
  for (std::uint64_t seed : c.seeds) {
    const fs::path mdir = seed_model_dir(c, seed);
    flow::FlowBundle bundle = flow::load_flow(mdir / "flow.bin", graph);
    world::MapperNet mapper = world::load_mapper(mdir / "mapper.bin", graph.dim());
    const world::WorldModel model(std::move(bundle.flow), std::move(mapper),
                                  std::move(bundle.normalizer));
    inputs.push_back(mdir / "flow.bin");
    inputs.push_back(mdir / "mapper.bin");
    log << "train-policy seed " << seed << ": " << policy::to_string(c.policy.algorithm) << ", "
        << c.policy.updates << " updates\n";
    const policy::TrainResult res = policy::train_policy(model, *environment, starts, c.policy, seed);
    policy::write_metrics_rows(metrics, res.metrics);
    policy::save_policy(policy_path(c, seed), res.policy);
    curves.push_back(res.curve);
    finals[std::to_string(seed)] = {{"final_return", res.final_return},
                                    {"nonfinite_incidents", res.nonfinite_incidents}};
    log << "train-policy seed " << seed << ": final true return " << res.final_return << "\n";
  }
  {
    std::ofstream curve(dir / "learning_curve.csv");
    policy::write_learning_curve(curve, c.seeds, curves);
  }
  ordered_json summary;
  summary["algorithm"] = policy::to_string(c.policy.algorithm);
  summary["quality"] = mdp::to_string(c.data.quality);
  summary["dataset_top10_return"] = mdp::top_fraction_mean(mdp::episode_returns(ds));
  summary["seeds"] = finals;
  detail::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  write_phase_meta(dir, inv, inputs);
}

void cmd_eval(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  for (std::uint64_t seed : c.seeds) require_file(policy_path(c, seed), "run train-policy first");
  const auto environment = make_environment(c);
  const fs::path dir = phase_dir(c, "eval");
  ordered_json report;
  report["env"] = c.env;
  report["episodes"] = c.policy.eval_episodes;
  ordered_json per_seed = ordered_json::object();
  std::vector<fs::path> inputs;
  double total = 0.0;
  for (std::uint64_t seed : c.seeds) {
    const policy::PolicyNet pi = policy::load_policy(policy_path(c, seed));
    inputs.push_back(policy_path(c, seed));
    const auto ev = policy::evaluate_true_env(pi, *environment, c.policy.eval_episodes,
                                                policy::evaluation_seed(seed));
    per_seed[std::to_string(seed)] = {
        {"mean_return", ev.mean_return}, {"std_error", ev.std_error}, {"returns", ev.returns}};
    total += ev.mean_return;
    log << "seed " << seed << ": mean return " << ev.mean_return << " +- " << ev.std_error << "\n";
  }
  report["seeds"] = per_seed;
  report["mean_of_seed_means"] = total / static_cast<double>(c.seeds.size());
  log << "mean over seeds: " << report["mean_of_seed_means"].get<double>() << "\n";
  detail::write_text_file(dir / "report.json", report.dump(2) + "\n");
  write_phase_meta(dir, inv, inputs);
}

void cmd_frozenlake_ood(const Invocation& inv, std::ostream& log) {
  const RunConfig& c = inv.config;
  const fs::path dir = phase_dir(c, "frozenlake");
  ordered_json per_seed = ordered_json::object();
  int wins = 0;
  for (std::uint64_t seed : c.seeds) {
    log << "frozenlake-ood seed " << seed << "\n";
    const OodSeedResult r = run_frozenlake_ood(c, seed);
    std::ofstream csv(dir / ("seed_" + std::to_string(seed) + ".csv"));
    write_ood_csv(csv, r.rows);
    ordered_json j = ood_summary_json(r.summary);
    j["rows"] = r.rows.size();
    j["flow_final_nll"] = r.flow_final_nll;
    j["mapper_final_l1"] = r.mapper_final_l1;
    j["baseline_final_l2"] = r.baseline_final_l2;
    per_seed[std::to_string(seed)] = j;
    wins += r.summary.cnf_ood_lrd < r.summary.mlp_ood_lrd ? 1 : 0;
    log << "  test L/R/D mean L1: cnf " << r.summary.cnf_ood_lrd << ", mlp "
        << r.summary.mlp_ood_lrd << "; top-row Up: cnf " << r.summary.cnf_top_row_up << ", mlp "
        << r.summary.mlp_top_row_up << "\n";
  }
  ordered_json summary;
  summary["split_threshold"] = c.grid_split;
  summary["seeds_cnf_better_on_test_left_right_down"] = wins;
  summary["seeds"] = per_seed;
  detail::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  std::vector<fs::path> inputs;
  if (!c.graph_path.empty()) inputs.emplace_back(c.graph_path);
  write_phase_meta(dir, inv, inputs);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Causal-flow world models and likelihood-gated offline policy training"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  const std::vector<std::string> names{"gen-data", "train-model", "train-policy", "frozenlake-ood",
                                       "eval"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "run a single seed instead of the configured list");
    sub->add_option("--out", out, "output directory (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  try {
    Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    inv.config_path = config_path;
    inv.config = load_run_config(config_path);
    if (seed) inv.config.seeds = {*seed};
    if (out) inv.config.out = *out;
    inv.config.validate();
    if (inv.command == "gen-data") cmd_gen_data(inv, std::cout);
    else if (inv.command == "train-model") cmd_train_model(inv, std::cout);
    else if (inv.command == "train-policy") cmd_train_policy(inv, std::cout);
    else if (inv.command == "frozenlake-ood") cmd_frozenlake_ood(inv, std::cout);
    else cmd_eval(inv, std::cout);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace moodcrl::cli
