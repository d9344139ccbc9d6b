#ifndef MOODCRL_CLI_HASH_HPP_
#define MOODCRL_CLI_HASH_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace moodcrl::cli {

// Git blob id: SHA-1 of "blob <size>\0" followed by the content, lowercase hex.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::filesystem::path& path);

}  // namespace moodcrl::cli

#endif  // MOODCRL_CLI_HASH_HPP_
