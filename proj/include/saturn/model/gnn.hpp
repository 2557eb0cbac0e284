#pragma once

#include "saturn/graph/cnf_graph.hpp"
#include "saturn/model/model.hpp"

namespace saturn::model {

struct GnnOutput {
  /// Promoted symbol embeddings, one column per symbol id [n x y].
  Var symbols;
  /// Promoted input clause embeddings, one column per input clause [n x c].
  Var clauses;
};

/// Per-kind input embeddings, k rounds of message passing over the 16
/// directed edge kinds, then the two promotion affines.
GnnOutput run_gnn(Tape& tape, const ModelVars& vars, const graph::CnfGraph& graph);

}  // namespace saturn::model
