#include "saturn/model/evaluator.hpp"

namespace saturn::model {

std::vector<double> NeuralEvaluator::evaluate(std::span<const ClauseId> batch, const logic::ClauseStore& store) {
  for (ClauseId id : batch) {
    if (id < state_.input_count()) continue;
    const logic::Clause& c = store[id];
    state_.gage_insert(id, c.rule, c.parents);
  }
  state_.gage_eval_pending();
  return state_.score(batch, store);
}

}  // namespace saturn::model
