#ifndef MOODCRL_NN_CHECKPOINT_HPP_
#define MOODCRL_NN_CHECKPOINT_HPP_

#include <filesystem>
#include <iosfwd>

#include "moodcrl/nn/param_store.hpp"

namespace moodcrl::nn {

inline constexpr int kCheckpointVersion = 1;

// Layout:
//   moodcrl-params <version>\n
//   <array count>\n
//   <name> <rows> <cols>\n          (one line per array)
//   data\n
//   row-major float64 little-endian values, arrays in manifest order
void write_checkpoint(std::ostream& out, const ParamStore& store);
void save_checkpoint(const std::filesystem::path& path, const ParamStore& store);

// Loads values into a store whose names and shapes must match the file.
void read_checkpoint(std::istream& in, ParamStore& store);
void load_checkpoint(const std::filesystem::path& path, ParamStore& store);

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_CHECKPOINT_HPP_
