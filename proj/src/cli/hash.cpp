#include "moodcrl/cli/hash.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>

#include "moodcrl/errors.hpp"

namespace moodcrl::cli {

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-1 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string git_blob_hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return git_blob_hash(content);
}

}  // namespace moodcrl::cli
