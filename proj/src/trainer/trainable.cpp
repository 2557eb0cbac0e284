#include "saturn/trainer/trainable.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace saturn::trainer {

namespace {

std::optional<TrainableTrace> reject(std::string* reason, std::string why) {
  if (reason) *reason = std::move(why);
  return std::nullopt;
}

}  // namespace

std::vector<ClauseId> TrainableTrace::scored_clauses() const {
  std::set<ClauseId> ids;
  for (const TrainingStep& step : steps) ids.insert(step.passive.begin(), step.passive.end());
  return {ids.begin(), ids.end()};
}

std::vector<ClauseId> TrainableTrace::derivation_closure() const {
  const std::size_t inputs = problem.clauses.size();
  std::vector<bool> seen(clauses.size(), false);
  std::vector<ClauseId> stack = scored_clauses();
  std::vector<ClauseId> out;
  while (!stack.empty()) {
    ClauseId id = stack.back();
    stack.pop_back();
    if (id < inputs || seen[id]) continue;
    seen[id] = true;
    out.push_back(id);
    for (ClauseId p : clauses[id].parents) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<TrainableTrace> make_trainable(const prover::Trace& trace, std::string* reason) {
  if (trace.outcome != prover::Outcome::Refutation) return reject(reason, "not a refutation");
  if (trace.steps.empty()) return reject(reason, "no selection steps");
  prover::TraceHeights heights = prover::trace_heights(trace);
  if (heights.derivation > kMaxTraceHeight || heights.term > kMaxTraceHeight) {
    return reject(reason, "height " + std::to_string(std::max(heights.derivation, heights.term)) + " exceeds " +
                              std::to_string(kMaxTraceHeight));
  }

  TrainableTrace out;
  out.problem_id = trace.problem_id;
  out.problem = trace.input_problem();
  out.selection_steps = trace.steps.size();

  std::unordered_map<ClauseId, ClauseId> dense;
  for (const prover::TraceClause& tc : trace.clauses) {
    dense.emplace(tc.clause.id, static_cast<ClauseId>(out.clauses.size()));
    out.original_ids.push_back(tc.clause.id);
    logic::Clause c = tc.clause;
    c.id = static_cast<ClauseId>(out.clauses.size());
    for (ClauseId& p : c.parents) {
      auto it = dense.find(p);
      if (it == dense.end()) throw std::invalid_argument("trace clause " + std::to_string(tc.clause.id) + " has an unknown parent");
      p = it->second;
    }
    out.clauses.push_back(std::move(c));
  }

  std::set<ClauseId> proof(trace.proof.begin(), trace.proof.end());
  for (const std::vector<ClauseId>& snapshot : prover::reconstruct_passive_sets(trace)) {
    TrainingStep step;
    for (ClauseId id : snapshot) {
      if (proof.count(id)) step.good.push_back(static_cast<std::uint32_t>(step.passive.size()));
      step.passive.push_back(dense.at(id));
    }
    if (!step.good.empty()) out.steps.push_back(std::move(step));
  }
  return out;
}

std::vector<std::vector<int>> reward_assignment(const prover::Trace& trace) {
  std::set<ClauseId> proof(trace.proof.begin(), trace.proof.end());
  std::vector<std::vector<int>> rewards;
  for (const std::vector<ClauseId>& snapshot : prover::reconstruct_passive_sets(trace)) {
    std::vector<int>& row = rewards.emplace_back();
    for (ClauseId id : snapshot) row.push_back(proof.count(id) ? 1 : 0);
  }
  return rewards;
}

}  // namespace saturn::trainer
