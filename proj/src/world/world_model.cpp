#include "moodcrl/world/world_model.hpp"

#include <limits>
#include <ostream>

#include "../json_util.hpp"

namespace moodcrl::world {

WorldModel::WorldModel(flow::CausalFlow flow, MapperNet mapper, mdp::Normalizer normalizer)
    : flow_(std::move(flow)), mapper_(std::move(mapper)), normalizer_(std::move(normalizer)) {
  require(flow_.frozen(), "world model: the flow must be trained and frozen");
  require(mapper_.dim() == flow_.dim(), "world model: mapper and flow dimensions differ");
  require(normalizer_.dim() == flow_.dim(), "world model: normalizer dimension mismatch");
}

Prediction WorldModel::predict_batch(const Matrix& states, const Matrix& actions) const {
  const auto& lay = layout();
  const Matrix x_pert = build_perturbed(states, actions, lay, normalizer_);
  const Matrix u = mapper_.forward(flow_.forward(x_pert).u);
  Matrix x_hat = flow_.inverse(u);
  const Matrix raw = normalizer_.denormalize(x_hat);

  const Index present = lay.state_dim() + lay.action_dim();
  x_hat.topRows(present) = x_pert.topRows(present);
  Prediction p;
  p.next_state = raw.middleRows(lay.next_state().begin, lay.state_dim());
  p.reward = raw.row(lay.reward_index()).transpose();
  p.log_prob = flow_.log_prob(x_hat);
  return p;
}

Prediction WorldModel::predict(const Matrix& states, const Matrix& actions) const {
  require(states.cols() == actions.cols(), "predict: batch size mismatch");
  if (!states.allFinite() || !actions.allFinite()) {
    throw NumericError("predict: non-finite query");
  }
  try {
    return predict_batch(states, actions);
  } catch (const NumericError&) {
    // Isolate the failing queries; the rest keep their predictions.
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Index n = states.cols();
  Prediction p{Matrix::Constant(layout().state_dim(), n, nan), Vector::Constant(n, nan),
               Vector::Constant(n, nan)};
  for (Index k = 0; k < n; ++k) {
    try {
      const Prediction one = predict_batch(states.col(k), actions.col(k));
      p.next_state.col(k) = one.next_state.col(0);
      p.reward[k] = one.reward[0];
      p.log_prob[k] = one.log_prob[0];
    } catch (const NumericError&) {
    }
  }
  return p;
}

void write_prediction_trace(std::ostream& out, const Matrix& states, const Matrix& actions,
                            const Prediction& prediction) {
  require(states.cols() == actions.cols() && states.cols() == prediction.next_state.cols(),
          "prediction trace: batch size mismatch");
  for (Index k = 0; k < states.cols(); ++k) {
    detail::ordered_json line;
    line["s"] = detail::vector_to_json(states.col(k));
    line["a"] = detail::vector_to_json(actions.col(k));
    line["s_next_pred"] = detail::vector_to_json(prediction.next_state.col(k));
    line["r_pred"] = prediction.reward[k];
    line["log_prob"] = prediction.log_prob[k];
    out << line.dump() << "\n";
  }
}

}  // namespace moodcrl::world
