#ifndef MOODCRL_MDP_DATASET_HPP_
#define MOODCRL_MDP_DATASET_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "moodcrl/mdp/tuple.hpp"

namespace moodcrl::mdp {

enum class Quality { low, medium, custom };

std::string to_string(Quality q);
Quality parse_quality(std::string_view name);

inline constexpr double kStdFloor = 1e-6;

// Per-dimension z-normalization fitted once on training data and then frozen.
struct Normalizer {
  Vector mean;
  Vector std;

  Index dim() const { return mean.size(); }
  Matrix normalize(const Matrix& x) const;
  Matrix denormalize(const Matrix& z) const;
  Vector normalize(const Vector& x) const;
  Vector denormalize(const Vector& z) const;
};

struct Dataset {
  TupleLayout layout;
  std::vector<TransitionTuple> tuples;
  std::vector<int> episodes;        // episode index of each tuple, non-decreasing
  Quality quality = Quality::custom;
  std::vector<bool> discrete_dims;  // per tuple dimension; empty = all continuous

  std::size_t size() const { return tuples.size(); }
  bool empty() const { return tuples.empty(); }

  void push_back(TransitionTuple tuple, int episode);

  // Index of the first tuple of every episode, strictly increasing.
  std::vector<std::size_t> episode_boundaries() const;

  // d x N matrix of flattened tuples.
  Matrix to_matrix() const;

  // Throws ValidationError when an invariant does not hold.
  void validate() const;

  bool is_discrete(Index dim) const;
};

// Throws on an empty dataset.
Normalizer fit_normalizer(const Dataset& dataset);
Normalizer fit_normalizer(const Matrix& x);

// Undiscounted return of every episode, in episode order.
std::vector<double> episode_returns(const Dataset& dataset);

// Mean of the best ceil(10%) of the given returns.
double top_fraction_mean(std::vector<double> returns, double fraction = 0.1);

// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace moodcrl::mdp

#endif  // MOODCRL_MDP_DATASET_HPP_
