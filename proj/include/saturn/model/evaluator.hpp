#pragma once

#include "saturn/model/eval_state.hpp"
#include "saturn/prover/passive.hpp"

namespace saturn::model {

/// Clause evaluator for NeuralPassive. Input clauses are embedded by the GNN
/// at construction; every batch is gage-inserted, embedded layer by layer
/// and scored in one pass.
class NeuralEvaluator final : public prover::ClauseEvaluator {
 public:
  /// `problem` must be the exact problem handed to the prover.
  NeuralEvaluator(const Model& model, const logic::Problem& problem, EvalOptions options = {})
      : state_(model, problem, options) {}

  std::vector<double> evaluate(std::span<const ClauseId> batch, const logic::ClauseStore& store) override;

  const EvalState& state() const { return state_; }

 private:
  EvalState state_;
};

}  // namespace saturn::model
