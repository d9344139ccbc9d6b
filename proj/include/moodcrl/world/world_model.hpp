#ifndef MOODCRL_WORLD_WORLD_MODEL_HPP_
#define MOODCRL_WORLD_WORLD_MODEL_HPP_

#include <iosfwd>

#include "moodcrl/flow/causal_flow.hpp"
#include "moodcrl/mdp/dataset.hpp"
#include "moodcrl/world/mapper.hpp"
#include "moodcrl/world/transition_model.hpp"

namespace moodcrl::world {

// Counterfactual one-step predictor:
//   x~ = normalize(s, a, s, 0) -> u~ = F(x~) -> u = G(u~) -> x^ = F^-1(u)
// The s' and r blocks of denormalize(x^) are the prediction. The gate
// log-likelihood is log p_F of x^ with its s and a blocks replaced by the
// normalized query, i.e. scored in normalized tuple space.
class WorldModel final : public TransitionModel {
 public:
  // The flow must be frozen.
  WorldModel(flow::CausalFlow flow, MapperNet mapper, mdp::Normalizer normalizer);

  const mdp::TupleLayout& layout() const override { return flow_.graph().layout(); }
  Prediction predict(const Matrix& states, const Matrix& actions) const override;

  const flow::CausalFlow& flow() const { return flow_; }
  const MapperNet& mapper() const { return mapper_; }
  const mdp::Normalizer& normalizer() const { return normalizer_; }

 private:
  Prediction predict_batch(const Matrix& states, const Matrix& actions) const;

  flow::CausalFlow flow_;
  MapperNet mapper_;
  mdp::Normalizer normalizer_;
};

// One JSON object per query:
//   {"s":[...],"a":[...],"s_next_pred":[...],"r_pred":...,"log_prob":...}
void write_prediction_trace(std::ostream& out, const Matrix& states, const Matrix& actions,
                            const Prediction& prediction);

}  // namespace moodcrl::world

#endif  // MOODCRL_WORLD_WORLD_MODEL_HPP_
