#ifndef MOODCRL_CLI_RUN_CONFIG_HPP_
#define MOODCRL_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "moodcrl/env/environment.hpp"
#include "moodcrl/env/grid_lake.hpp"
#include "moodcrl/env/pendulum.hpp"
#include "moodcrl/flow/causal_flow.hpp"
#include "moodcrl/flow/train.hpp"
#include "moodcrl/mdp/dataset.hpp"
#include "moodcrl/policy/trainer.hpp"
#include "moodcrl/world/baseline.hpp"
#include "moodcrl/world/mapper.hpp"

namespace moodcrl::cli {

struct DataConfig {
  std::string low_path;     // empty: <out>/data/low.jsonl
  std::string medium_path;  // empty: <out>/data/medium.jsonl
  mdp::Quality quality = mdp::Quality::low;  // dataset used by train-model
  int low_end = 2000;
  int medium_end = 3000;
  double behavior_lr = 1e-4;
  // Tuples drawn (without replacement, fixed seed) for model training;
  // 0 uses the whole dataset.
  std::size_t train_subsample = 0;
};

// Every tunable of a run. Defaults follow the published hyperparameters;
// fields absent from the JSON document keep their default.
struct RunConfig {
  std::string env = "pendulum";
  env::GridLakeConfig grid;
  int grid_split = 45;
  env::PendulumParams pendulum;
  std::string graph_path;  // empty: the environment's default graph
  DataConfig data;
  flow::FlowConfig flow;
  flow::FlowTrainConfig flow_train;
  world::MapperConfig mapper;
  world::BaselineConfig baseline;
  policy::TrainConfig policy;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::string out = "runs/default";

  void validate() const;
};

// Throws ValidationError on unknown keys or ill-typed values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const RunConfig& config);

std::unique_ptr<env::Environment> make_environment(const RunConfig& config);

}  // namespace moodcrl::cli

#endif  // MOODCRL_CLI_RUN_CONFIG_HPP_
