#ifndef MOODCRL_CLI_COMMANDS_HPP_
#define MOODCRL_CLI_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "moodcrl/cli/run_config.hpp"

namespace moodcrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

// Run directory layout under config.out:
//   data/       low.jsonl, medium.jsonl, summary.json
//   model/      seed_<k>/{flow.bin, mapper.bin, flow_loss.csv, mapper_loss.csv}
//   policy/     policy_seed_<k>.bin, metrics.csv, learning_curve.csv, summary.json
//   eval/       report.json
//   frozenlake/ seed_<k>.csv, summary.json
// Each phase directory also holds resolved_config.json and input_hashes.json.
struct Invocation {
  std::string command;
  std::filesystem::path config_path;
  RunConfig config;
};

void cmd_gen_data(const Invocation& inv, std::ostream& log);
void cmd_train_model(const Invocation& inv, std::ostream& log);
void cmd_train_policy(const Invocation& inv, std::ostream& log);
void cmd_frozenlake_ood(const Invocation& inv, std::ostream& log);
void cmd_eval(const Invocation& inv, std::ostream& log);

// Parses argv, dispatches, and maps errors to exit codes.
int run_cli(int argc, char** argv);

}  // namespace moodcrl::cli

#endif  // MOODCRL_CLI_COMMANDS_HPP_
