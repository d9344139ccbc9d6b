#ifndef MOODCRL_NN_GRAD_CHECK_HPP_
#define MOODCRL_NN_GRAD_CHECK_HPP_

#include <functional>
#include <string>

#include "moodcrl/nn/param_store.hpp"

namespace moodcrl::nn {

struct GradCheckOptions {
  double step = 1e-5;
  // Relative error is |a - n| / max(|a|, |n|, scale_floor).
  double scale_floor = 1e-5;
  // 0 checks every entry; otherwise at most this many entries per array,
  // spread evenly across it.
  Index max_entries_per_array = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::string worst_param;
  Index worst_entry = -1;
  std::size_t entries_checked = 0;
  double tolerance = 0.0;
  bool passed() const { return max_rel_error < tolerance; }
};

using ScalarLoss = std::function<double(const ParamStore&)>;

// Compares an analytic gradient against central finite differences of
// `loss`. `params` is perturbed in place and restored before returning.
GradCheckReport grad_check(const ScalarLoss& loss, ParamStore& params,
                           const GradStore& analytic, double tolerance,
                           const GradCheckOptions& options = {});

// Scalar-function variant for quick checks on a plain vector.
GradCheckReport grad_check_vector(const std::function<double(const Vector&)>& f,
                                  const Vector& x, const Vector& analytic,
                                  double tolerance, const GradCheckOptions& options = {});

}  // namespace moodcrl::nn

#endif  // MOODCRL_NN_GRAD_CHECK_HPP_
