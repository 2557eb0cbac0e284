#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "saturn/logic/clause.hpp"
#include "saturn/logic/features.hpp"
#include "saturn/logic/problem.hpp"
#include "saturn/model/model.hpp"

namespace saturn::model {

using logic::ClauseId;

struct EvalOptions {
  /// Share subterm and literal embeddings across clauses and calls.
  bool cache_terms = true;
};

/// Combine counters: layers are bulk calls, nodes are embedded DAG nodes.
struct EvalStats {
  std::uint64_t gage_layers = 0;
  std::uint64_t gage_nodes = 0;
  std::uint64_t gweight_layers = 0;
  std::uint64_t gweight_nodes = 0;
};

/// Embeddings of the clauses and terms of one proof attempt.
///
/// Clause embeddings (gage) follow the derivation DAG: input clauses are
/// seeded by the GNN at height 0 and derived clauses are buffered by
/// gage_insert at the lowest level all their parents allow, then embedded
/// one layer per bulk combine. Term embeddings (gweight) are keyed by
/// (term, polarity) and layered by term height.
///
/// Constructed with a recording tape, every embedding stays a node of that
/// tape so a loss over score_var() reaches all parameters. Otherwise
/// embeddings are copied into private caches and each call runs on a fresh
/// value-only tape.
class EvalState {
 public:
  EvalState(const Model& model, const logic::Problem& problem, EvalOptions options = {});
  EvalState(Model& model, const logic::Problem& problem, Tape& tape, EvalOptions options = {});
  ~EvalState();
  EvalState(const EvalState&) = delete;
  EvalState& operator=(const EvalState&) = delete;

  std::size_t input_count() const { return input_count_; }

  /// Buffers a derived clause. Throws std::invalid_argument when a parent
  /// has no height or the clause was already inserted.
  void gage_insert(ClauseId id, logic::Rule rule, std::span<const ClauseId> parents);
  /// Embeds every buffered clause, one bulk combine per non-empty layer.
  void gage_eval_pending();

  std::uint32_t height(ClauseId id) const;
  std::uint32_t base_level() const { return base_level_; }
  /// Buffered clauses per layer, index 0 at base_level.
  std::vector<std::size_t> pending_layer_sizes() const;

  /// Logits of embedded clauses; `store` provides literals and features.
  std::vector<double> score(std::span<const ClauseId> ids, const logic::ClauseStore& store);
  /// Logits as a [1 x ids.size()] node of the training tape.
  Var score_var(std::span<const ClauseId> ids, const std::vector<logic::Clause>& clauses, const logic::TermBank& terms);

  /// Clause embedding from the derivation DAG.
  Tensor gage_embedding(ClauseId id) const;
  /// Embedding of `term` under polarity -1, 0 or +1; variables give the
  /// shared variable vector.
  Tensor term_embedding(logic::TermId term, int polarity, const logic::TermBank& terms);
  /// Sum of the literal embeddings of `clause`.
  Tensor clause_term_embedding(const logic::Clause& clause, const logic::TermBank& terms);

  const EvalStats& stats() const { return stats_; }

 private:
  struct Frame;
  class Table;
  struct Pending {
    ClauseId id;
    logic::Rule rule;
    std::vector<ClauseId> parents;
  };

  template <typename F>
  auto with_frame(F&& f);
  void seed(Frame& frame, const logic::Problem& problem);
  void gage_layer(Frame& frame, const std::vector<Pending>& layer);
  /// Makes sure every listed (term, polarity) node is embedded in `table`.
  void gweight_embed(Frame& frame, Table& table, std::span<const std::uint64_t> keys, const logic::TermBank& terms);
  Var clause_term_embeddings(Frame& frame, std::span<const logic::Clause* const> clauses, const logic::TermBank& terms);
  Var logits(Frame& frame, std::span<const logic::Clause* const> clauses, const logic::TermBank& terms);

  const Model& model_;
  EvalOptions options_;
  std::size_t input_count_ = 0;
  logic::FeatureContext features_;
  std::unique_ptr<Frame> training_;
  /// Promoted symbol embeddings when not training.
  Tensor symbols_;
  std::unique_ptr<Table> gage_table_;
  std::unique_ptr<Table> term_table_;
  std::unordered_map<ClauseId, std::uint32_t> heights_;
  std::uint32_t base_level_ = 0;
  std::vector<std::vector<Pending>> todo_layers_;
  EvalStats stats_;
};

/// Cache key of a term under a polarity in {-1, 0, +1}.
inline std::uint64_t term_key(logic::TermId term, int polarity) {
  return (static_cast<std::uint64_t>(term) << 2) | static_cast<std::uint64_t>(polarity + 1);
}

}  // namespace saturn::model
