#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "saturn/logic/problem.hpp"
#include "saturn/prover/passive.hpp"
#include "saturn/prover/trace.hpp"

namespace saturn::prover {

struct SaturationOptions {
  /// Maximum number of clause activations; must be positive.
  std::uint64_t max_activations = 10000;
  std::optional<std::chrono::milliseconds> time_limit;
  /// Ends the run as ResourceOut once this many conclusions were generated.
  std::optional<std::uint64_t> max_generated;
  /// Conclusions with a deeper atom are dropped.
  std::uint32_t max_term_height = 500;
  bool record_trace = false;
};

struct SaturationResult {
  Outcome outcome = Outcome::Saturated;
  /// Id of the derived empty clause on refutation.
  std::optional<ClauseId> empty_clause;
  /// Ancestor closure of the empty clause, sorted by id.
  std::vector<ClauseId> proof;
  SaturationStats stats;
  /// Every clause created during the run, including discarded ones.
  logic::ClauseStore store;
  /// Filled when recording was requested; settings are left to the caller.
  std::optional<Trace> trace;
};

/// Given-clause saturation with binary resolution and factoring. Input
/// clauses (ids = positions in `problem`) and conclusions pass a tautology
/// check on creation and forward subsumption against active and passive
/// clauses before they become selectable.
SaturationResult saturate(const logic::Problem& problem, PassiveSet& passive, const SaturationOptions& options);

/// Ancestor closure of `root` over recorded parents, sorted by id.
std::vector<ClauseId> ancestor_closure(const std::vector<Clause>& clauses, ClauseId root);

/// Seeded permutation of clause order and of literal order within clauses;
/// variables are renumbered afterwards. Symbols keep their ids.
logic::Problem shuffle_problem(const logic::Problem& problem, std::uint64_t seed);

/// Computes SInE levels; call once before saturation.
void prepare_problem(logic::Problem& problem);

}  // namespace saturn::prover
