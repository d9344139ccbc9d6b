#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moodcrl/cli/commands.hpp"
#include "moodcrl/cli/frozenlake_ood.hpp"
#include "moodcrl/cli/hash.hpp"
#include "moodcrl/cli/run_config.hpp"
#include "moodcrl/errors.hpp"
#include "moodcrl/policy/io.hpp"
#include "support.hpp"

namespace moodcrl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "moodcrl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

// A pendulum run small enough to take every phase in a few seconds.
json tiny_pendulum(const fs::path& out) {
  json doc = json::parse(R"({
    "env": "pendulum",
    "data": {"low_end": 6, "medium_end": 9},
    "flow": {"num_layers": 1, "hidden": [8], "epochs": 1, "noise_std": 0.01},
    "mapper": {"hidden": [8], "epochs": 1},
    "policy": {"hidden": [8], "horizon": 20, "episodes_per_update": 2, "updates": 2,
               "eval_every": 1, "eval_episodes": 1},
    "seeds": [0]
  })");
  doc["out"] = out.string();
  return doc;
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

TEST(RunConfig, DefaultsAndRoundTrip) {
  const RunConfig c = parse_run_config(json::object());
  EXPECT_EQ(c.env, "pendulum");
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.policy.gate_threshold, -15.0);
  const auto j = to_json(c);
  EXPECT_EQ(j["policy"]["algorithm"], "ppo");
  const RunConfig back = parse_run_config(json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
}

TEST(RunConfig, UnknownKeyIsRejected) {
  EXPECT_THROW(parse_run_config(json::parse(R"({"flwo": {}})")), ValidationError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"flow": {"epoch": 3}})")), ValidationError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"seeds": "zero"})")), ValidationError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"policy": {"algorithm": "sac"}})")),
               ValidationError);
}

TEST(RunConfig, ValidationCatchesInconsistentWindows) {
  EXPECT_THROW(
      parse_run_config(json::parse(R"({"data": {"low_end": 10, "medium_end": 5}})")).validate(),
      ValidationError);
}

TEST(RunConfig, ShippedConfigsLoad) {
  for (const char* name : {"pendulum.json", "gridlake.json"}) {
    const fs::path p = fs::path(MOODCRL_SOURCE_DIR) / "configs" / name;
    EXPECT_NO_THROW(load_run_config(p).validate()) << name;
  }
}

TEST(GitBlobHash, MatchesGit) {
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Cli, UsageErrorsReturnValidationCode) {
  EXPECT_EQ(run({}), kExitValidation);
  EXPECT_EQ(run({"gen-data"}), kExitValidation);
  EXPECT_EQ(run({"gen-data", "--config", "/nonexistent/config.json"}), kExitValidation);
}

TEST(Cli, OutOfOrderPhaseIsRejected) {
  testing::TempDir dir("cli_order");
  const fs::path cfg = write_config(dir.path(), tiny_pendulum(dir.path() / "run"));
  EXPECT_EQ(run({"train-policy", "--config", cfg.string()}), kExitValidation);
  EXPECT_EQ(run({"eval", "--config", cfg.string()}), kExitValidation);
}

TEST(Cli, NonFinitePolicyReturnsNumericCode) {
  testing::TempDir dir("cli_numeric");
  const fs::path out = dir.path() / "run";
  const fs::path cfg = write_config(dir.path(), tiny_pendulum(out));
  policy::PolicyNet pi = policy::PolicyNet::gaussian(4, 1);
  for (auto id : pi.params().ids()) pi.params().value(id).setConstant(1e308);
  fs::create_directories(out / "policy");
  policy::save_policy(out / "policy" / "policy_seed_0.bin", pi);
  EXPECT_EQ(run({"eval", "--config", cfg.string()}), kExitNumeric);
}

TEST(Cli, FullPipelineIsReproducible) {
  testing::TempDir dir("cli_pipeline");
  const fs::path out = dir.path() / "run";
  const fs::path cfg = write_config(dir.path(), tiny_pendulum(out));
  for (const char* phase : {"gen-data", "train-model", "train-policy", "eval"}) {
    ASSERT_EQ(run({phase, "--config", cfg.string()}), kExitOk) << phase;
  }
  const std::string low = read_text(out / "data" / "low.jsonl");
  const std::string summary = read_text(out / "data" / "summary.json");
  EXPECT_TRUE(json::parse(summary).contains("top10_return"));
  EXPECT_EQ(first_line(out / "model" / "seed_0" / "flow_loss.csv"), "epoch,nll");
  EXPECT_EQ(first_line(out / "model" / "seed_0" / "mapper_loss.csv"), "epoch,l1");
  EXPECT_EQ(first_line(out / "policy" / "metrics.csv"),
            "seed,update,env_steps,mean_return,trunc_rate,loss_policy,loss_value");
  EXPECT_EQ(first_line(out / "policy" / "learning_curve.csv"), "update,seed_0");
  for (const char* phase : {"data", "model", "policy", "eval"}) {
    const json hashes = json::parse(read_text(out / phase / "input_hashes.json"));
    ASSERT_FALSE(hashes.empty()) << phase;
    EXPECT_EQ(hashes[0]["git_blob_sha1"], git_blob_hash(read_text(cfg)));
    EXPECT_TRUE(fs::exists(out / phase / "resolved_config.json"));
  }
  const json report = json::parse(read_text(out / "eval" / "report.json"));
  const json policy_summary = json::parse(read_text(out / "policy" / "summary.json"));
  EXPECT_DOUBLE_EQ(report["seeds"]["0"]["mean_return"].get<double>(),
                   policy_summary["seeds"]["0"]["final_return"].get<double>());

  ASSERT_EQ(run({"gen-data", "--config", cfg.string()}), kExitOk);
  EXPECT_EQ(read_text(out / "data" / "low.jsonl"), low);
  EXPECT_EQ(read_text(out / "data" / "summary.json"), summary);
}

TEST(FrozenLakeOod, SummaryAveragesRows) {
  std::vector<OodRow> rows{{0, 2, 1, 1.5, 3.0, 0.5, 2.0, false},
                           {0, 3, 0, 0.0, 1.0, 0.0, 1.0, false},
                           {100, 2, 101, 101.0, 101.0, 0.0, 0.0, true}};
  const OodSummary s = summarize_ood(rows, 15);
  EXPECT_DOUBLE_EQ(s.cnf_region[0], 0.0);
  EXPECT_DOUBLE_EQ(s.cnf_region[1], 0.25);
  EXPECT_DOUBLE_EQ(s.mlp_region[1], 1.5);
  EXPECT_DOUBLE_EQ(s.cnf_ood_lrd, 0.5);
  EXPECT_DOUBLE_EQ(s.mlp_ood_lrd, 2.0);
  EXPECT_EQ(s.top_row_up_count, 1u);
  EXPECT_DOUBLE_EQ(s.mlp_top_row_up, 1.0);
  std::stringstream csv;
  write_ood_csv(csv, rows);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.substr(0, 4), "s,a,");
}

}  // namespace
}  // namespace moodcrl::cli
