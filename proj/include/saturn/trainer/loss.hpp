#pragma once

#include <span>

#include "saturn/model/model.hpp"
#include "saturn/trainer/trainable.hpp"

namespace saturn::trainer {

struct LossResult {
  double loss = 0.0;
  std::size_t problems = 0;
  std::size_t traces = 0;
  std::size_t steps = 0;
};

/// Fair-averaged policy loss over a batch:
///
///   loss = -sum_P w_P * d_P / sum_P w_P
///
/// where d_P is the mean over the traces of P of the mean over their steps
/// of the mean log-softmax (over the step's passive set) of the good
/// clauses. w_P is the weight of the first trace of P in the batch.
///
/// With `gradients` set, d loss / d theta is added to the parameter grads;
/// the GNN is re-run for every trace. Throws std::invalid_argument when no
/// trace has a usable step.
LossResult compute_loss(model::Model& model, std::span<const TrainableTrace* const> traces, bool gradients);
LossResult compute_loss(model::Model& model, std::span<const TrainableTrace> traces, bool gradients);

}  // namespace saturn::trainer
