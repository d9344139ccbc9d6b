#include "moodcrl/mdp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "moodcrl/errors.hpp"

namespace moodcrl::mdp {

std::string to_string(Quality q) {
  switch (q) {
    case Quality::low:
      return "low";
    case Quality::medium:
      return "medium";
    case Quality::custom:
      return "custom";
  }
  return "custom";
}

Quality parse_quality(std::string_view name) {
  if (name == "low") return Quality::low;
  if (name == "medium") return Quality::medium;
  if (name == "custom") return Quality::custom;
  throw ValidationError("unknown dataset quality '" + std::string(name) + "'");
}

Matrix Normalizer::normalize(const Matrix& x) const {
  require(x.rows() == dim(), "normalize: dimension mismatch");
  return ((x.colwise() - mean).array().colwise() / std.array()).matrix();
}

Matrix Normalizer::denormalize(const Matrix& z) const {
  require(z.rows() == dim(), "denormalize: dimension mismatch");
  return ((z.array().colwise() * std.array()).matrix().colwise() + mean);
}

Vector Normalizer::normalize(const Vector& x) const {
  require(x.size() == dim(), "normalize: dimension mismatch");
  return ((x - mean).array() / std.array()).matrix();
}

Vector Normalizer::denormalize(const Vector& z) const {
  require(z.size() == dim(), "denormalize: dimension mismatch");
  return (z.array() * std.array()).matrix() + mean;
}

void Dataset::push_back(TransitionTuple tuple, int episode) {
  tuples.push_back(std::move(tuple));
  episodes.push_back(episode);
}

std::vector<std::size_t> Dataset::episode_boundaries() const {
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    if (i == 0 || episodes[i] != episodes[i - 1]) starts.push_back(i);
  }
  return starts;
}

Matrix Dataset::to_matrix() const {
  Matrix x(layout.dim(), static_cast<Index>(tuples.size()));
  for (std::size_t n = 0; n < tuples.size(); ++n) {
    x.col(static_cast<Index>(n)) = flatten(tuples[n], layout);
  }
  return x;
}

void Dataset::validate() const {
  require(episodes.size() == tuples.size(), "dataset: episode index count != tuple count");
  require(discrete_dims.empty() || static_cast<Index>(discrete_dims.size()) == layout.dim(),
          "dataset: discrete flags must cover every tuple dimension");
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    require(t.s.size() == layout.state_dim() && t.s_next.size() == layout.state_dim() &&
                t.a.size() == layout.action_dim(),
            "dataset: tuple " + std::to_string(i) + " does not match the layout");
    require(t.is_finite(), "dataset: tuple " + std::to_string(i) + " has non-finite entries");
    if (i > 0) {
      require(episodes[i] >= episodes[i - 1], "dataset: episode indices must be non-decreasing");
    }
  }
  const auto starts = episode_boundaries();
  for (std::size_t k = 1; k < starts.size(); ++k) {
    require(starts[k] > starts[k - 1], "dataset: episode boundaries must increase");
  }
  require(starts.empty() || starts.back() <= tuples.size(), "dataset: boundary past end");
}

bool Dataset::is_discrete(Index dim) const {
  return !discrete_dims.empty() && discrete_dims.at(static_cast<std::size_t>(dim));
}

Normalizer fit_normalizer(const Matrix& x) {
  require(x.cols() > 0, "fit_normalizer: empty dataset");
  Normalizer n;
  n.mean = x.rowwise().mean();
  const Matrix centered = x.colwise() - n.mean;
  n.std = (centered.array().square().rowwise().sum() / static_cast<double>(x.cols()))
              .sqrt()
              .max(kStdFloor)
              .matrix();
  return n;
}

Normalizer fit_normalizer(const Dataset& dataset) {
  require(!dataset.empty(), "fit_normalizer: empty dataset");
  return fit_normalizer(dataset.to_matrix());
}

std::vector<double> episode_returns(const Dataset& dataset) {
  std::vector<double> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (i == 0 || dataset.episodes[i] != dataset.episodes[i - 1]) out.push_back(0.0);
    out.back() += dataset.tuples[i].r;
  }
  return out;
}

double top_fraction_mean(std::vector<double> returns, double fraction) {
  require(!returns.empty(), "top_fraction_mean: no returns");
  require(fraction > 0.0 && fraction <= 1.0, "top_fraction_mean: fraction must be in (0, 1]");
  std::sort(returns.begin(), returns.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(
      std::max(1.0, std::ceil(fraction * static_cast<double>(returns.size()))));
  return std::accumulate(returns.begin(), returns.begin() + static_cast<long>(k), 0.0) /
         static_cast<double>(k);
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: no values");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace moodcrl::mdp
