#include "saturn/model/gnn.hpp"

namespace saturn::model {

namespace {

Tensor transpose(const Tensor& t) {
  Tensor out(t.cols(), t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) out(c, r) = t(r, c);
  }
  return out;
}

struct DirectedKind {
  std::size_t index;
  std::size_t source_kind;
  std::size_t target_kind;
  /// Per target node, the source nodes of its incoming edges.
  std::vector<std::vector<std::uint32_t>> neighbours;
};

}  // namespace

GnnOutput run_gnn(Tape& tape, const ModelVars& vars, const graph::CnfGraph& graph) {
  std::array<Var, graph::kNodeKinds> x;
  for (std::size_t kind = 0; kind < graph::kNodeKinds; ++kind) {
    Var features = tape.constant(transpose(graph.features[kind]));
    x[kind] = tape.relu(tape.affine(vars.embed[kind].first, features, vars.embed[kind].second));
  }

  std::vector<DirectedKind> directed;
  for (std::size_t e = 0; e < graph::kEdgeKinds; ++e) {
    auto src = static_cast<std::size_t>(graph::kEdgeKindInfo[e].source);
    auto dst = static_cast<std::size_t>(graph::kEdgeKindInfo[e].target);
    DirectedKind forward{2 * e, src, dst, std::vector<std::vector<std::uint32_t>>(graph.features[dst].rows())};
    DirectedKind reverse{2 * e + 1, dst, src, std::vector<std::vector<std::uint32_t>>(graph.features[src].rows())};
    for (const graph::Edge& edge : graph.edges[e]) {
      forward.neighbours[edge.target].push_back(edge.source);
      reverse.neighbours[edge.source].push_back(edge.target);
    }
    directed.push_back(std::move(forward));
    directed.push_back(std::move(reverse));
  }

  for (std::uint32_t round = 0; round < vars.hp.k; ++round) {
    std::array<Var, graph::kNodeKinds> next;
    for (std::size_t kind = 0; kind < graph::kNodeKinds; ++kind) {
      std::vector<Var> terms;
      for (const DirectedKind& d : directed) {
        if (d.target_kind != kind) continue;
        const auto& [self, neighbour] = vars.kernels[round * kDirectedEdgeKinds + d.index];
        terms.push_back(tape.matmul(self, x[kind]));
        terms.push_back(tape.matmul(neighbour, tape.group_mean(x[d.source_kind], d.neighbours)));
      }
      Var total = terms[0];
      for (std::size_t i = 1; i < terms.size(); ++i) total = tape.add(total, terms[i]);
      next[kind] = tape.relu(total);
    }
    x = next;
  }

  GnnOutput out;
  out.symbols = tape.affine(vars.promote_symbol.first, x[static_cast<std::size_t>(graph::NodeKind::Symbol)],
                            vars.promote_symbol.second);
  out.clauses = tape.affine(vars.promote_clause.first, x[static_cast<std::size_t>(graph::NodeKind::Clause)],
                            vars.promote_clause.second);
  return out;
}

}  // namespace saturn::model
