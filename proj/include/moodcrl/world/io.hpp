#ifndef MOODCRL_WORLD_IO_HPP_
#define MOODCRL_WORLD_IO_HPP_

#include <filesystem>

#include "moodcrl/world/baseline.hpp"
#include "moodcrl/world/mapper.hpp"

namespace moodcrl::world {

// Parameter checkpoint plus a `path`.json sidecar with the architecture.
void save_mapper(const std::filesystem::path& path, const MapperNet& mapper);
MapperNet load_mapper(const std::filesystem::path& path, Index dim);

void save_baseline(const std::filesystem::path& path, const BaselineDynamicsNet& net);
BaselineDynamicsNet load_baseline(const std::filesystem::path& path,
                                  const mdp::TupleLayout& layout);

}  // namespace moodcrl::world

#endif  // MOODCRL_WORLD_IO_HPP_
