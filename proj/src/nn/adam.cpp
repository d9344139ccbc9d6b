#include "moodcrl/nn/adam.hpp"

#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::nn {

AdamReport adam_step(ParamStore& store, const GradStore& grads, const AdamConfig& config) {
  require(config.lr > 0.0, "Adam learning rate must be positive");
  require(grads.size() == store.size(), "gradient/parameter layout mismatch");
  for (auto id : store.ids()) {
    require(grads[id].rows() == store.value(id).rows() &&
                grads[id].cols() == store.value(id).cols(),
            "gradient shape mismatch for '" + store.name(id) + "'");
  }

  AdamReport report;
  if (!grads.all_finite()) {
    report.skipped_nonfinite = true;
    report.step = store.step();
    return report;
  }

  const std::int64_t t = store.step() + 1;
  store.set_step(t);
  report.step = t;

  if (grads.all_zero()) {
    report.zero_gradient = true;
    for (auto id : store.ids()) {
      store.first_moment(id) *= config.beta1;
      store.second_moment(id) *= config.beta2;
    }
    return report;
  }

  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  for (auto id : store.ids()) {
    Matrix& w = store.value(id);
    Matrix& m = store.first_moment(id);
    Matrix& v = store.second_moment(id);
    Matrix g = grads[id];
    if (config.weight_decay != 0.0) g += config.weight_decay * w;
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseAbs2();
    w.array() -= config.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + config.eps);
  }
  report.applied = true;
  return report;
}

}  // namespace moodcrl::nn
