#include "moodcrl/nn/param_store.hpp"

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {

ParamId ParamStore::add(std::string name, Matrix value) {
  require(!find(name).has_value(), "duplicate parameter name '" + name + "'");
  require(value.allFinite(), "parameter '" + name + "' initialized with non-finite values");
  Entry e;
  e.m = Matrix::Zero(value.rows(), value.cols());
  e.v = Matrix::Zero(value.rows(), value.cols());
  e.value = std::move(value);
  e.name = std::move(name);
  entries_.push_back(std::move(e));
  return ParamId{entries_.size() - 1};
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
  return n;
}

std::optional<ParamId> ParamStore::find(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return ParamId{i};
  }
  return std::nullopt;
}

void ParamStore::reset_optimizer() {
  for (auto& e : entries_) {
    e.m.setZero();
    e.v.setZero();
  }
  step_ = 0;
}

bool ParamStore::all_finite() const {
  for (const auto& e : entries_) {
    if (!e.value.allFinite()) return false;
  }
  return true;
}

void ParamStore::copy_values_from(const ParamStore& other) {
  require(other.size() == size(), "parameter store layouts differ");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& src = other.entries_[i];
    require(src.name == entries_[i].name && src.value.rows() == entries_[i].value.rows() &&
                src.value.cols() == entries_[i].value.cols(),
            "parameter store layouts differ at '" + entries_[i].name + "'");
    entries_[i].value = src.value;
  }
}

std::vector<ParamId> ParamStore::ids() const {
  std::vector<ParamId> out;
  out.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out.push_back(ParamId{i});
  return out;
}

GradStore::GradStore(const ParamStore& store) {
  grads_.reserve(store.size());
  for (auto id : store.ids()) {
    const auto& v = store.value(id);
    grads_.push_back(Matrix::Zero(v.rows(), v.cols()));
  }
}

void GradStore::set_zero() {
  for (auto& g : grads_) g.setZero();
}

bool GradStore::all_finite() const {
  for (const auto& g : grads_) {
    if (!g.allFinite()) return false;
  }
  return true;
}

bool GradStore::all_zero() const {
  for (const auto& g : grads_) {
    if ((g.array() != 0.0).any()) return false;
  }
  return true;
}

double GradStore::squared_norm() const {
  double s = 0.0;
  for (const auto& g : grads_) s += g.squaredNorm();
  return s;
}

void GradStore::scale(double factor) {
  for (auto& g : grads_) g *= factor;
}

GradStore& GradStore::operator+=(const GradStore& other) {
  require(other.grads_.size() == grads_.size(), "gradient store layouts differ");
  for (std::size_t i = 0; i < grads_.size(); ++i) grads_[i] += other.grads_[i];
  return *this;
}

}  // namespace moodcrl::nn
