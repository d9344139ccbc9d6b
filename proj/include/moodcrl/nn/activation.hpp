#ifndef MOODCRL_NN_ACTIVATION_HPP_
#define MOODCRL_NN_ACTIVATION_HPP_

#include <string>
#include <string_view>

#include "moodcrl/nn/types.hpp"

namespace moodcrl::nn {

enum class Activation { identity, elu, leaky_relu, tanh };

inline constexpr double kLeakySlope = 0.01;
inline constexpr double kEluAlpha = 1.0;

double activate(Activation act, double pre);

// Derivative of the activation given both its input and its output.
double activate_grad(Activation act, double pre, double post);

void activate_inplace(Activation act, Matrix& m);

// d_pre = d_post * act'(pre), computed elementwise.
Matrix activation_backward(Activation act, const Matrix& pre,
                           const Matrix& post, const Matrix& d_post);

Activation parse_activation(std::string_view name);
std::string to_string(Activation act);

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_ACTIVATION_HPP_
