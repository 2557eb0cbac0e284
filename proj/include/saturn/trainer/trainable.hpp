#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saturn/logic/problem.hpp"
#include "saturn/prover/trace.hpp"

namespace saturn::trainer {

using logic::ClauseId;

/// Traces whose derivation or term height exceeds this are not trained on.
inline constexpr std::uint32_t kMaxTraceHeight = 500;

/// One selection step: the passive set and its proof clauses.
struct TrainingStep {
  /// Dense ids of P_i, ascending.
  std::vector<ClauseId> passive;
  /// Positions within `passive` of the clauses that occur in the proof.
  std::vector<std::uint32_t> good;
};

/// A successful trace in the shape the loss needs. Clause ids are dense:
/// inputs keep 0..n-1 and derived clauses follow in their original order.
struct TrainableTrace {
  std::string problem_id;
  /// The inputs as seen by the prover; terms cover every derived clause too.
  logic::Problem problem;
  std::vector<logic::Clause> clauses;
  /// Original id of each dense id.
  std::vector<ClauseId> original_ids;
  /// Steps with at least one good clause.
  std::vector<TrainingStep> steps;
  /// Selection steps of the run, including those without good clauses.
  std::size_t selection_steps = 0;
  /// Relative weight of the trace's problem in the loss.
  double weight = 1.0;

  /// Every clause id that occurs in a kept step, ascending.
  std::vector<ClauseId> scored_clauses() const;
  /// Derived clauses the scored ones depend on, ascending.
  std::vector<ClauseId> derivation_closure() const;
};

/// Converts a refutation trace. Returns nullopt with a reason when the trace
/// is not a refutation, has no selection steps or is higher than
/// kMaxTraceHeight.
std::optional<TrainableTrace> make_trainable(const prover::Trace& trace, std::string* reason = nullptr);

/// r = 1 for proof clauses and 0 otherwise, per snapshot of
/// reconstruct_passive_sets and in the same order.
std::vector<std::vector<int>> reward_assignment(const prover::Trace& trace);

}  // namespace saturn::trainer
