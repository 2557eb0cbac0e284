#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "saturn/logic/clause.hpp"
#include "saturn/logic/problem.hpp"

namespace saturn::prover {

using logic::Clause;
using logic::ClauseId;

enum class Outcome { Refutation, Saturated, ResourceOut };

std::string_view outcome_name(Outcome outcome);
Outcome parse_outcome(std::string_view name);

struct SaturationStats {
  std::uint64_t activations = 0;
  std::uint64_t generated = 0;
  std::uint64_t selection_steps = 0;
  std::uint64_t tautologies = 0;
  std::uint64_t subsumed = 0;
  /// Conclusions dropped for exceeding the term height limit.
  std::uint64_t too_deep = 0;
  std::uint64_t passive_peak = 0;

  friend bool operator==(const SaturationStats&, const SaturationStats&) = default;
};

/// Settings echoed in the trace header.
struct TraceSettings {
  std::string mode = "baseline";
  std::uint64_t seed = 0;
  double temperature = 0.0;
  std::uint64_t budget = 0;
  bool shuffle = false;
};

struct TraceClause {
  Clause clause;
  /// Input clause removed before saturation (tautology or subsumed).
  bool deleted = false;
};

struct SelectionStep {
  ClauseId selected = 0;
  /// Clauses that entered the passive set since the previous selection.
  std::vector<ClauseId> added;
  /// Clauses that left the passive set since the previous selection.
  std::vector<ClauseId> removed;
};

/// Record of one proof attempt: the clause table with derivations, the
/// passive-set deltas of every selection step and the proof clause set.
struct Trace {
  std::string problem_id;
  TraceSettings settings;
  logic::SymbolTable symbols;
  logic::TermBank terms;
  /// Sorted by id; input clauses first with ids 0..n-1.
  std::vector<TraceClause> clauses;
  std::vector<SelectionStep> steps;
  Outcome outcome = Outcome::Saturated;
  /// Ancestor closure of the empty clause, sorted. Empty unless refuted.
  std::vector<ClauseId> proof;
  SaturationStats stats;

  std::size_t input_count() const;
  /// Index into `clauses` for an id, throws std::out_of_range if absent.
  std::size_t index_of(ClauseId id) const;
  /// The input problem exactly as seen by the prover.
  logic::Problem input_problem() const;
};

inline constexpr int kTraceFormatVersion = 1;

void write_trace(std::ostream& out, const Trace& trace);
std::string write_trace(const Trace& trace);
/// Throws std::runtime_error naming the offending line on malformed input.
Trace read_trace(std::istream& in);
Trace load_trace(const std::string& path);
void save_trace(const std::string& path, const Trace& trace);

/// Passive-set snapshots P_1..P_n reconstructed from the recorded deltas,
/// each sorted by clause id.
std::vector<std::vector<ClauseId>> reconstruct_passive_sets(const Trace& trace);

/// Largest derivation height and term height over the clause table.
struct TraceHeights {
  std::uint32_t derivation = 0;
  std::uint32_t term = 0;
};
TraceHeights trace_heights(const Trace& trace);

}  // namespace saturn::prover
