#include "moodcrl/nn/dense.hpp"

#include <cmath>
#include <string>

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {
namespace {

void check_spec(const MaskedLinearSpec& spec) {
  require(spec.in_dim > 0 && spec.out_dim > 0, "layer dimensions must be positive");
  if (spec.mask.size() == 0) return;
  require(spec.mask.rows() == spec.out_dim && spec.mask.cols() == spec.in_dim,
          "mask shape must be out_dim x in_dim");
  require(((spec.mask.array() == 0.0) || (spec.mask.array() == 1.0)).all(),
          "mask entries must be 0 or 1");
}

}  // namespace

Matrix glorot_uniform(Index rows, Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix w(rows, cols);
  // Fill row-major so the draw order does not depend on Eigen storage order.
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) w(r, c) = dist(rng);
  }
  return w;
}

Vector dense_forward(const Matrix& weight, const Vector& bias,
                     const MaskedLinearSpec& spec, const Vector& input) {
  check_spec(spec);
  require(input.size() == spec.in_dim, "dense_forward: input length " +
                                           std::to_string(input.size()) + " != in_dim " +
                                           std::to_string(spec.in_dim));
  require(weight.rows() == spec.out_dim && weight.cols() == spec.in_dim,
          "dense_forward: weight shape mismatch");
  require(bias.size() == spec.out_dim, "dense_forward: bias length mismatch");
  Matrix out;
  if (spec.mask.size() == 0) {
    out = weight * input + bias;
  } else {
    out = weight.cwiseProduct(spec.mask) * input + bias;
  }
  activate_inplace(spec.activation, out);
  return out;
}

DenseStack::DenseStack(ParamStore& store, std::string_view prefix,
                       std::vector<MaskedLinearSpec> specs, Rng& rng,
                       FinalInit final_init)
    : specs_(std::move(specs)) {
  require(!specs_.empty(), "DenseStack needs at least one layer");
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    check_spec(specs_[l]);
    if (l > 0) {
      require(specs_[l].in_dim == specs_[l - 1].out_dim, "DenseStack layer dims do not chain");
    }
    const auto& s = specs_[l];
    const bool zero = final_init == FinalInit::zeros && l + 1 == specs_.size();
    Matrix w = zero ? Matrix::Zero(s.out_dim, s.in_dim) : glorot_uniform(s.out_dim, s.in_dim, rng);
    const std::string base = std::string(prefix) + "." + std::to_string(l);
    LinearParams p;
    p.weight = store.add(base + ".weight", std::move(w));
    p.bias = store.add(base + ".bias", Matrix::Zero(s.out_dim, 1));
    params_.push_back(p);
  }
}

std::vector<MaskedLinearSpec> DenseStack::mlp_specs(Index in_dim,
                                                    const std::vector<Index>& hidden,
                                                    Index out_dim, Activation hidden_act,
                                                    Activation out_act) {
  std::vector<MaskedLinearSpec> specs;
  Index prev = in_dim;
  for (Index h : hidden) {
    specs.push_back({prev, h, Matrix(), hidden_act});
    prev = h;
  }
  specs.push_back({prev, out_dim, Matrix(), out_act});
  return specs;
}

Matrix DenseStack::effective_weight(const ParamStore& store, std::size_t layer) const {
  const Matrix& w = store.value(params_.at(layer).weight);
  const auto& mask = specs_[layer].mask;
  if (mask.size() == 0) return w;
  return w.cwiseProduct(mask);
}

Matrix DenseStack::forward(const ParamStore& store, const Matrix& input) const {
  require(input.rows() == in_dim(), "DenseStack::forward: input has " +
                                        std::to_string(input.rows()) + " rows, expected " +
                                        std::to_string(in_dim()));
  Matrix h = input;
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const auto& s = specs_[l];
    const Vector& b = store.value(params_[l].bias).col(0);
    Matrix z;
    if (s.mask.size() == 0) {
      z.noalias() = store.value(params_[l].weight) * h;
    } else {
      z.noalias() = effective_weight(store, l) * h;
    }
    z.colwise() += b;
    activate_inplace(s.activation, z);
    h = std::move(z);
  }
  return h;
}

Matrix DenseStack::forward(const ParamStore& store, const Matrix& input, DenseTape& tape) const {
  require(input.rows() == in_dim(), "DenseStack::forward: input has " +
                                        std::to_string(input.rows()) + " rows, expected " +
                                        std::to_string(in_dim()));
  tape.inputs.assign(specs_.size(), Matrix());
  tape.pre.assign(specs_.size(), Matrix());
  tape.post.assign(specs_.size(), Matrix());
  const Matrix* h = &input;
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const auto& s = specs_[l];
    tape.inputs[l] = *h;
    Matrix z;
    if (s.mask.size() == 0) {
      z.noalias() = store.value(params_[l].weight) * (*h);
    } else {
      z.noalias() = effective_weight(store, l) * (*h);
    }
    z.colwise() += store.value(params_[l].bias).col(0);
    tape.pre[l] = z;
    activate_inplace(s.activation, z);
    tape.post[l] = std::move(z);
    h = &tape.post[l];
  }
  tape.owner = this;
  return tape.post.back();
}

Matrix DenseStack::backward(const ParamStore& store, const DenseTape& tape,
                            const Matrix& d_output, GradStore& grads) const {
  if (!tape.recorded() || tape.owner != this || tape.post.size() != specs_.size()) {
    throw ValidationError("DenseStack::backward called without a matching forward record");
  }
  require(d_output.rows() == out_dim() && d_output.cols() == tape.post.back().cols(),
          "DenseStack::backward: output cotangent shape mismatch");
  Matrix d = d_output;
  for (std::size_t li = specs_.size(); li-- > 0;) {
    const auto& s = specs_[li];
    Matrix dz = activation_backward(s.activation, tape.pre[li], tape.post[li], d);
    Matrix dw = dz * tape.inputs[li].transpose();
    if (s.mask.size() != 0) dw.array() *= s.mask.array();
    grads[params_[li].weight] += dw;
    grads[params_[li].bias] += dz.rowwise().sum();
    if (s.mask.size() == 0) {
      d.noalias() = store.value(params_[li].weight).transpose() * dz;
    } else {
      d.noalias() = effective_weight(store, li).transpose() * dz;
    }
  }
  return d;
}

}  // namespace moodcrl::nn
