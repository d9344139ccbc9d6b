#include "moodcrl/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {
namespace {

void put_le(std::ostream& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  out.write(bytes, 8);
}

double get_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw ValidationError("checkpoint truncated");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_checkpoint(std::ostream& out, const ParamStore& store) {
  out << "moodcrl-params " << kCheckpointVersion << "\n" << store.size() << "\n";
  for (auto id : store.ids()) {
    const auto& v = store.value(id);
    out << store.name(id) << " " << v.rows() << " " << v.cols() << "\n";
  }
  out << "data\n";
  for (auto id : store.ids()) {
    const auto& v = store.value(id);
    for (Index r = 0; r < v.rows(); ++r) {
      for (Index c = 0; c < v.cols(); ++c) put_le(out, v(r, c));
    }
  }
}

void save_checkpoint(const std::filesystem::path& path, const ParamStore& store) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write checkpoint " + path.string());
  write_checkpoint(out, store);
  if (!out) throw ValidationError("failed writing checkpoint " + path.string());
}

void read_checkpoint(std::istream& in, ParamStore& store) {
  std::string line;
  std::getline(in, line);
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  header >> magic >> version;
  require(magic == "moodcrl-params", "not a parameter checkpoint");
  require(version == kCheckpointVersion,
          "unsupported checkpoint version " + std::to_string(version));
  std::getline(in, line);
  const std::size_t count = std::stoul(line);
  require(count == store.size(), "checkpoint has " + std::to_string(count) +
                                     " arrays, model expects " + std::to_string(store.size()));
  for (auto id : store.ids()) {
    std::getline(in, line);
    std::istringstream entry(line);
    std::string name;
    Index rows = 0;
    Index cols = 0;
    entry >> name >> rows >> cols;
    const auto& v = store.value(id);
    require(name == store.name(id) && rows == v.rows() && cols == v.cols(),
            "checkpoint manifest mismatch at '" + store.name(id) + "' (file has '" + name + "')");
  }
  std::getline(in, line);
  require(line == "data", "checkpoint missing data marker");
  for (auto id : store.ids()) {
    Matrix& v = store.value(id);
    for (Index r = 0; r < v.rows(); ++r) {
      for (Index c = 0; c < v.cols(); ++c) v(r, c) = get_le(in);
    }
  }
  require(store.all_finite(), "checkpoint contains non-finite values");
}

void load_checkpoint(const std::filesystem::path& path, ParamStore& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  read_checkpoint(in, store);
}

}  // namespace moodcrl::nn
