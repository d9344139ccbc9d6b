#include "moodcrl/cli/frozenlake_ood.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "moodcrl/env/graphs.hpp"
#include "moodcrl/errors.hpp"
#include "moodcrl/mdp/io.hpp"
#include "moodcrl/world/baseline.hpp"
#include "moodcrl/world/world_model.hpp"

namespace moodcrl::cli {
namespace {

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  double value() const { return n == 0 ? std::nan("") : sum / static_cast<double>(n); }
};

Vector dequant_widths(const mdp::Dataset& ds, const mdp::Normalizer& norm) {
  Vector w = Vector::Zero(ds.layout.dim());
  for (Index i = 0; i < w.size(); ++i) {
    if (ds.is_discrete(i)) w[i] = 0.5 / norm.std[i];
  }
  return w;
}

}  // namespace

OodSeedResult run_frozenlake_ood(const RunConfig& config, std::uint64_t seed) {
  require(config.env == "gridlake", "frozenlake-ood needs env = 'gridlake'");
  const env::GridSplit split = env::frozenlake_split(config.grid, config.grid_split);
  const mdp::CausalGraph graph = config.graph_path.empty()
                                     ? env::grid_graph()
                                     : mdp::load_graph(config.graph_path, split.train.layout);
  const mdp::Normalizer norm = mdp::fit_normalizer(split.train);
  const Matrix x = norm.normalize(split.train.to_matrix());

  OodSeedResult result;
  result.seed = seed;
  flow::CausalFlow flow(graph, config.flow, seed);
  flow::FlowTrainConfig ftc = config.flow_train;
  ftc.seed = seed;
  result.flow_final_nll = flow::train_nll(flow, x, ftc, dequant_widths(split.train, norm)).final_nll;
  flow.freeze();

  world::MapperConfig mc = config.mapper;
  mc.seed = seed;
  world::MapperNet mapper(graph.dim(), mc);
  result.mapper_final_l1 =
      world::train_mapper(mapper, flow, x, world::perturb_normalized(x, graph.layout(), norm))
          .final_loss;

  world::BaselineConfig bc = config.baseline;
  bc.seed = seed;
  world::BaselineDynamicsNet baseline(graph.layout(), bc);
  result.baseline_final_l2 = world::train_baseline(baseline, x).final_loss;

  const world::WorldModel model(std::move(flow), std::move(mapper), norm);
  for (const mdp::Dataset* part : {&split.train, &split.test}) {
    const Matrix all = part->to_matrix();
    const Matrix states = all.topRows(1);
    const Matrix actions = all.middleRows(1, 1);
    const world::Prediction cnf = model.predict(states, actions);
    const world::BaselinePrediction mlp = world::predict_baseline(baseline, norm, states, actions);
    for (Index k = 0; k < all.cols(); ++k) {
      OodRow row;
      row.s = static_cast<int>(all(0, k));
      row.a = static_cast<int>(all(1, k));
      row.true_next = static_cast<int>(all(2, k));
      row.cnf_pred = cnf.next_state(0, k);
      row.mlp_pred = mlp.next_state(0, k);
      row.cnf_l1 = std::abs(row.cnf_pred - row.true_next);
      row.mlp_l1 = std::abs(row.mlp_pred - row.true_next);
      row.train = part == &split.train;
      result.rows.push_back(row);
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const OodRow& l, const OodRow& r) { return l.s != r.s ? l.s < r.s : l.a < r.a; });
  result.summary = summarize_ood(result.rows, config.grid.side);
  return result;
}

OodSummary summarize_ood(const std::vector<OodRow>& rows, int side) {
  std::array<Mean, 2> cnf_region, mlp_region;
  std::array<Mean, 4> cnf_action, mlp_action;
  Mean cnf_lrd, mlp_lrd, cnf_up, mlp_up;
  const int up = static_cast<int>(env::GridAction::up);
  for (const auto& r : rows) {
    const std::size_t region = r.train ? 0 : 1;
    cnf_region[region].add(r.cnf_l1);
    mlp_region[region].add(r.mlp_l1);
    if (r.train) continue;
    cnf_action.at(static_cast<std::size_t>(r.a)).add(r.cnf_l1);
    mlp_action.at(static_cast<std::size_t>(r.a)).add(r.mlp_l1);
    if (r.a != up) {
      cnf_lrd.add(r.cnf_l1);
      mlp_lrd.add(r.mlp_l1);
    } else if (r.s < side) {
      cnf_up.add(r.cnf_l1);
      mlp_up.add(r.mlp_l1);
    }
  }
  OodSummary s;
  for (std::size_t i = 0; i < 2; ++i) {
    s.cnf_region[i] = cnf_region[i].value();
    s.mlp_region[i] = mlp_region[i].value();
  }
  for (std::size_t i = 0; i < 4; ++i) {
    s.cnf_test_action[i] = cnf_action[i].value();
    s.mlp_test_action[i] = mlp_action[i].value();
  }
  s.cnf_ood_lrd = cnf_lrd.value();
  s.mlp_ood_lrd = mlp_lrd.value();
  s.cnf_top_row_up = cnf_up.value();
  s.mlp_top_row_up = mlp_up.value();
  s.top_row_up_count = cnf_up.n;
  return s;
}

void write_ood_csv(std::ostream& out, const std::vector<OodRow>& rows) {
  out << "s,a,true_s_next,cnf_pred,mlp_pred,cnf_L1,mlp_L1,region\n";
  const auto old = out.precision(10);
  for (const auto& r : rows) {
    out << r.s << ',' << r.a << ',' << r.true_next << ',' << r.cnf_pred << ',' << r.mlp_pred << ','
        << r.cnf_l1 << ',' << r.mlp_l1 << ',' << (r.train ? "train" : "test") << '\n';
  }
  out.precision(old);
}

nlohmann::ordered_json ood_summary_json(const OodSummary& s) {
  static const char* kActions[] = {"left", "down", "right", "up"};
  nlohmann::ordered_json j;
  j["mean_L1"] = {{"train", {{"cnf", s.cnf_region[0]}, {"mlp", s.mlp_region[0]}}},
                  {"test", {{"cnf", s.cnf_region[1]}, {"mlp", s.mlp_region[1]}}}};
  nlohmann::ordered_json by_action;
  for (std::size_t i = 0; i < 4; ++i) {
    by_action[kActions[i]] = {{"cnf", s.cnf_test_action[i]}, {"mlp", s.mlp_test_action[i]}};
  }
  j["test_mean_L1_by_action"] = by_action;
  j["test_left_right_down"] = {{"cnf", s.cnf_ood_lrd}, {"mlp", s.mlp_ood_lrd}};
  j["top_row_up"] = {{"note", "blocked by the wall; the rule is absent from the training region"},
                     {"count", s.top_row_up_count},
                     {"cnf", s.cnf_top_row_up},
                     {"mlp", s.mlp_top_row_up}};
  return j;
}

}  // namespace moodcrl::cli
