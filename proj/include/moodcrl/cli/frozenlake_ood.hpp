#ifndef MOODCRL_CLI_FROZENLAKE_OOD_HPP_
#define MOODCRL_CLI_FROZENLAKE_OOD_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "moodcrl/cli/run_config.hpp"

namespace moodcrl::cli {

struct OodRow {
  int s = 0;
  int a = 0;
  int true_next = 0;
  double cnf_pred = 0.0;  // continuous predicted next-state index
  double mlp_pred = 0.0;
  double cnf_l1 = 0.0;
  double mlp_l1 = 0.0;
  bool train = false;
};

struct OodSummary {
  // Mean L1 by region (0 = train, 1 = test) and model.
  std::array<double, 2> cnf_region{};
  std::array<double, 2> mlp_region{};
  // Mean L1 in the test region per action (Left, Down, Right, Up).
  std::array<double, 4> cnf_test_action{};
  std::array<double, 4> mlp_test_action{};
  // Test-region Left/Right/Down queries.
  double cnf_ood_lrd = 0.0;
  double mlp_ood_lrd = 0.0;
  // Up from the top row: the true move is blocked by the wall, a rule the
  // training region never shows.
  double cnf_top_row_up = 0.0;
  double mlp_top_row_up = 0.0;
  std::size_t top_row_up_count = 0;
};

struct OodSeedResult {
  std::uint64_t seed = 0;
  std::vector<OodRow> rows;
  OodSummary summary;
  double flow_final_nll = 0.0;
  double mapper_final_l1 = 0.0;
  double baseline_final_l2 = 0.0;
};

// Split, train flow + mapper and the regression baseline on the training
// region, then predict every valid (s, a).
OodSeedResult run_frozenlake_ood(const RunConfig& config, std::uint64_t seed);

OodSummary summarize_ood(const std::vector<OodRow>& rows, int side);

void write_ood_csv(std::ostream& out, const std::vector<OodRow>& rows);
nlohmann::ordered_json ood_summary_json(const OodSummary& summary);

}  // namespace moodcrl::cli

#endif  // MOODCRL_CLI_FROZENLAKE_OOD_HPP_
