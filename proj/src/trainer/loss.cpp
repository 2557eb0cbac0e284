#include "saturn/trainer/loss.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "saturn/model/eval_state.hpp"

namespace saturn::trainer {

namespace {

bool usable(const TrainableTrace& trace) {
  return std::any_of(trace.steps.begin(), trace.steps.end(), [](const TrainingStep& s) { return !s.good.empty(); });
}

/// Per-step scalars of one trace on `tape`; steps without good clauses are skipped.
std::vector<numerics::Var> step_terms(numerics::Tape& tape, model::Model& model, const TrainableTrace& trace) {
  model::EvalState state(model, trace.problem, tape);
  for (ClauseId id : trace.derivation_closure()) {
    const logic::Clause& c = trace.clauses[id];
    state.gage_insert(id, c.rule, c.parents);
  }
  state.gage_eval_pending();

  std::vector<ClauseId> scored = trace.scored_clauses();
  std::map<ClauseId, std::uint32_t> column;
  for (std::uint32_t i = 0; i < scored.size(); ++i) column.emplace(scored[i], i);
  numerics::Var logits = state.score_var(scored, trace.clauses, trace.problem.terms);

  std::vector<numerics::Var> out;
  out.reserve(trace.steps.size());
  for (const TrainingStep& step : trace.steps) {
    if (step.good.empty()) continue;
    std::vector<std::uint32_t> columns;
    columns.reserve(step.passive.size());
    for (ClauseId id : step.passive) columns.push_back(column.at(id));
    numerics::Var policy = tape.log_softmax(tape.gather_columns(logits, std::move(columns)));
    out.push_back(tape.mean_of(policy, step.good));
  }
  return out;
}

}  // namespace

LossResult compute_loss(model::Model& model, std::span<const TrainableTrace* const> traces, bool gradients) {
  std::map<std::string, std::vector<const TrainableTrace*>> by_problem;
  for (const TrainableTrace* t : traces) {
    if (usable(*t)) by_problem[t->problem_id].push_back(t);
  }
  if (by_problem.empty()) throw std::invalid_argument("no trace with a usable selection step");

  double total_weight = 0.0;
  for (const auto& [id, group] : by_problem) total_weight += group.front()->weight;

  LossResult result;
  result.problems = by_problem.size();
  for (const auto& [id, group] : by_problem) {
    const double problem_share = group.front()->weight / total_weight / static_cast<double>(group.size());
    for (const TrainableTrace* trace : group) {
      numerics::Tape tape;
      std::vector<numerics::Var> terms = step_terms(tape, model, *trace);
      std::vector<double> coefficients(terms.size(), -problem_share / static_cast<double>(terms.size()));
      numerics::Var loss = tape.weighted_sum(terms, coefficients);
      result.loss += tape.value(loss)[0];
      if (gradients) tape.backward(loss);
      ++result.traces;
      result.steps += terms.size();
    }
  }
  return result;
}

LossResult compute_loss(model::Model& model, std::span<const TrainableTrace> traces, bool gradients) {
  std::vector<const TrainableTrace*> pointers;
  pointers.reserve(traces.size());
  for (const TrainableTrace& t : traces) pointers.push_back(&t);
  return compute_loss(model, pointers, gradients);
}

}  // namespace saturn::trainer
