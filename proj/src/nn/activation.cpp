#include "moodcrl/nn/activation.hpp"

#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {

double activate(Activation act, double pre) {
  switch (act) {
    case Activation::identity:
      return pre;
    case Activation::elu:
      return pre > 0.0 ? pre : kEluAlpha * std::expm1(pre);
    case Activation::leaky_relu:
      return pre > 0.0 ? pre : kLeakySlope * pre;
    case Activation::tanh:
      return std::tanh(pre);
  }
  return pre;
}

double activate_grad(Activation act, double pre, double post) {
  switch (act) {
    case Activation::identity:
      return 1.0;
    case Activation::elu:
      return pre > 0.0 ? 1.0 : post + kEluAlpha;
    case Activation::leaky_relu:
      return pre > 0.0 ? 1.0 : kLeakySlope;
    case Activation::tanh:
      return 1.0 - post * post;
  }
  return 1.0;
}

void activate_inplace(Activation act, Matrix& m) {
  switch (act) {
    case Activation::identity:
      return;
    case Activation::elu:
      m = m.unaryExpr([](double v) { return v > 0.0 ? v : kEluAlpha * std::expm1(v); });
      return;
    case Activation::leaky_relu:
      m = m.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
      return;
    case Activation::tanh:
      m = m.array().tanh().matrix();
      return;
  }
}

Matrix activation_backward(Activation act, const Matrix& pre,
                           const Matrix& post, const Matrix& d_post) {
  switch (act) {
    case Activation::identity:
      return d_post;
    case Activation::elu:
      return (pre.array() > 0.0)
          .select(d_post.array(), d_post.array() * (post.array() + kEluAlpha))
          .matrix();
    case Activation::leaky_relu:
      return (pre.array() > 0.0)
          .select(d_post.array(), d_post.array() * kLeakySlope)
          .matrix();
    case Activation::tanh:
      return (d_post.array() * (1.0 - post.array().square())).matrix();
  }
  return d_post;
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "elu") return Activation::elu;
  if (name == "leakyrelu" || name == "leaky_relu") return Activation::leaky_relu;
  if (name == "tanh") return Activation::tanh;
  throw ValidationError("unknown activation '" + std::string(name) + "'");
}

std::string to_string(Activation act) {
  switch (act) {
    case Activation::identity:
      return "identity";
    case Activation::elu:
      return "elu";
    case Activation::leaky_relu:
      return "leakyrelu";
    case Activation::tanh:
      return "tanh";
  }
  return "identity";
}

}  // namespace moodcrl::nn
