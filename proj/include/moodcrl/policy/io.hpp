#ifndef MOODCRL_POLICY_IO_HPP_
#define MOODCRL_POLICY_IO_HPP_

#include <filesystem>

#include "moodcrl/policy/policy_net.hpp"

namespace moodcrl::policy {

// Parameter checkpoint plus a `path`.json sidecar with the head type and sizes.
void save_policy(const std::filesystem::path& path, const PolicyNet& policy);
PolicyNet load_policy(const std::filesystem::path& path);

}  // namespace moodcrl::policy

#endif  // MOODCRL_POLICY_IO_HPP_
