#ifndef MOODCRL_SRC_BATCHING_HPP_
#define MOODCRL_SRC_BATCHING_HPP_

#include <algorithm>
#include <numeric>
#include <vector>

#include "moodcrl/nn/types.hpp"

namespace moodcrl::detail {

// Reshuffles `order` and hands consecutive [begin, end) slices of it to `fn`.
template <class Fn>
void for_each_minibatch(std::vector<Index>& order, Index batch_size, Rng& rng, Fn&& fn) {
  std::shuffle(order.begin(), order.end(), rng);
  const auto n = order.size();
  const auto step = static_cast<std::size_t>(batch_size);
  for (std::size_t begin = 0; begin < n; begin += step) fn(begin, std::min(n, begin + step));
}

inline std::vector<Index> iota_indices(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

inline Matrix gather_columns(const Matrix& m, const std::vector<Index>& order, std::size_t begin,
                             std::size_t end) {
  Matrix out(m.rows(), static_cast<Index>(end - begin));
  for (std::size_t k = begin; k < end; ++k) out.col(static_cast<Index>(k - begin)) = m.col(order[k]);
  return out;
}

}  // namespace moodcrl::detail

#endif  // MOODCRL_SRC_BATCHING_HPP_
