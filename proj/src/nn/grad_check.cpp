#include "moodcrl/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {
namespace {

void record(GradCheckReport& report, double a, double n, double floor,
            const std::string& name, Index entry) {
  const double abs_err = std::abs(a - n);
  const double rel = abs_err / std::max({std::abs(a), std::abs(n), floor});
  report.max_abs_error = std::max(report.max_abs_error, abs_err);
  if (rel > report.max_rel_error || report.worst_entry < 0) {
    report.max_rel_error = std::max(report.max_rel_error, rel);
    report.worst_param = name;
    report.worst_entry = entry;
  }
  ++report.entries_checked;
}

}  // namespace

GradCheckReport grad_check(const ScalarLoss& loss, ParamStore& params,
                           const GradStore& analytic, double tolerance,
                           const GradCheckOptions& options) {
  require(analytic.size() == params.size(), "grad_check: layout mismatch");
  GradCheckReport report;
  report.tolerance = tolerance;
  const double h = options.step;
  for (auto id : params.ids()) {
    Matrix& w = params.value(id);
    const Index n = w.size();
    Index stride = 1;
    if (options.max_entries_per_array > 0 && n > options.max_entries_per_array) {
      stride = (n + options.max_entries_per_array - 1) / options.max_entries_per_array;
    }
    for (Index k = 0; k < n; k += stride) {
      double& slot = w.data()[k];
      const double saved = slot;
      slot = saved + h;
      const double up = loss(params);
      slot = saved - h;
      const double down = loss(params);
      slot = saved;
      const double numeric = (up - down) / (2.0 * h);
      record(report, analytic[id].data()[k], numeric, options.scale_floor, params.name(id), k);
    }
  }
  return report;
}

GradCheckReport grad_check_vector(const std::function<double(const Vector&)>& f,
                                  const Vector& x, const Vector& analytic,
                                  double tolerance, const GradCheckOptions& options) {
  require(x.size() == analytic.size(), "grad_check_vector: size mismatch");
  GradCheckReport report;
  report.tolerance = tolerance;
  Vector probe = x;
  for (Index k = 0; k < x.size(); ++k) {
    probe[k] = x[k] + options.step;
    const double up = f(probe);
    probe[k] = x[k] - options.step;
    const double down = f(probe);
    probe[k] = x[k];
    record(report, analytic[k], (up - down) / (2.0 * options.step), options.scale_floor, "x", k);
  }
  return report;
}

}  // namespace moodcrl::nn
