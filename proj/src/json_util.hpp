#ifndef MOODCRL_SRC_JSON_UTIL_HPP_
#define MOODCRL_SRC_JSON_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "moodcrl/errors.hpp"
#include "moodcrl/nn/types.hpp"

namespace moodcrl::detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json vector_to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline Vector vector_from_json(const nlohmann::json& arr, const std::string& what) {
  if (!arr.is_array()) throw ValidationError(what + " must be an array");
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
  return v;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace moodcrl::detail

#endif  // MOODCRL_SRC_JSON_UTIL_HPP_
