#ifndef MOODCRL_NN_TYPES_HPP_
#define MOODCRL_NN_TYPES_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace moodcrl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

// Batches are stored feature-major: one column per sample.
inline bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

}  // namespace moodcrl

#endif  // MOODCRL_NN_TYPES_HPP_
