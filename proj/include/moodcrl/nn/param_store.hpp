#ifndef MOODCRL_NN_PARAM_STORE_HPP_
#define MOODCRL_NN_PARAM_STORE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodcrl/nn/types.hpp"

namespace moodcrl::nn {

struct ParamId {
  std::size_t index = 0;
  friend bool operator==(ParamId, ParamId) = default;
};

// Named parameter arrays plus the Adam moment accumulators that travel with
// them. Every array has first/second moment arrays of identical shape.
class ParamStore {
 public:
  ParamId add(std::string name, Matrix value);

  std::size_t size() const { return entries_.size(); }
  std::size_t num_scalars() const;

  const std::string& name(ParamId id) const { return entries_.at(id.index).name; }
  Matrix& value(ParamId id) { return entries_.at(id.index).value; }
  const Matrix& value(ParamId id) const { return entries_.at(id.index).value; }
  Matrix& first_moment(ParamId id) { return entries_.at(id.index).m; }
  const Matrix& first_moment(ParamId id) const { return entries_.at(id.index).m; }
  Matrix& second_moment(ParamId id) { return entries_.at(id.index).v; }
  const Matrix& second_moment(ParamId id) const { return entries_.at(id.index).v; }

  std::optional<ParamId> find(std::string_view name) const;

  std::int64_t step() const { return step_; }
  void set_step(std::int64_t step) { step_ = step; }

  // Clears moments and the step counter; values are kept.
  void reset_optimizer();

  bool all_finite() const;

  // Copies values (not moments) from another store with identical layout.
  void copy_values_from(const ParamStore& other);

  std::vector<ParamId> ids() const;

 private:
  struct Entry {
    std::string name;
    Matrix value;
    Matrix m;
    Matrix v;
  };
  std::vector<Entry> entries_;
  std::int64_t step_ = 0;
};

// Gradient arrays shaped like a ParamStore.
class GradStore {
 public:
  GradStore() = default;
  explicit GradStore(const ParamStore& store);

  Matrix& operator[](ParamId id) { return grads_.at(id.index); }
  const Matrix& operator[](ParamId id) const { return grads_.at(id.index); }
  std::size_t size() const { return grads_.size(); }

  void set_zero();
  bool all_finite() const;
  bool all_zero() const;
  double squared_norm() const;
  void scale(double factor);
  GradStore& operator+=(const GradStore& other);

 private:
  std::vector<Matrix> grads_;
};

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_PARAM_STORE_HPP_
