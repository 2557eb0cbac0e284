#include "saturn/graph/cnf_graph.hpp"

#include <sstream>

namespace saturn::graph {

namespace {

double flag(bool b) { return b ? 1.0 : 0.0; }

class Builder {
 public:
  explicit Builder(const logic::Problem& problem) : problem_(problem) {}

  CnfGraph build() {
    add_sorts();
    add_symbols();
    for (const logic::Clause& clause : problem_.clauses) add_clause(clause);
    CnfGraph g;
    for (std::size_t k = 0; k < kNodeKinds; ++k) {
      const std::size_t width = kFeatureWidth[k];
      const std::size_t rows = rows_[k].size() / width;
      g.features[k] = numerics::Tensor(rows, width);
      std::copy(rows_[k].begin(), rows_[k].end(), g.features[k].data().begin());
    }
    g.edges = std::move(edges_);
    return g;
  }

 private:
  std::uint32_t add_node(NodeKind kind, std::initializer_list<double> features) {
    auto& rows = rows_[static_cast<std::size_t>(kind)];
    rows.insert(rows.end(), features);
    return static_cast<std::uint32_t>(rows.size() / kFeatureWidth[static_cast<std::size_t>(kind)] - 1);
  }

  void edge(int kind, std::uint32_t source, std::uint32_t target) { edges_[kind - 1].push_back({source, target}); }

  void add_sorts() {
    add_node(NodeKind::Sort, {1, 0, 0});
    add_node(NodeKind::Sort, {0, 1, 0});
  }

  void add_symbols() {
    std::vector<std::uint32_t> predicates, functions;
    for (const logic::Symbol& s : problem_.symbols.all()) {
      const double a = s.arity;
      add_node(NodeKind::Symbol, {flag(s.is_equality), flag(!s.is_predicate), flag(s.is_introduced), flag(s.is_skolem), 0.0,
                                  flag(a > 0), flag(a > 1), flag(a > 2), flag(a > 4), flag(a > 8)});
      edge(1, s.id, s.is_predicate ? kSortBoolean : kSortIndividual);
      (s.is_predicate ? predicates : functions).push_back(s.id);
    }
    for (const auto* order : {&predicates, &functions}) {
      const std::size_t n = order->size();
      for (std::size_t j = 0; j < n; ++j) {
        if (j + 1 < n) edge(2, (*order)[j], (*order)[j + 1]);
        for (std::size_t step = 2; j + step < n; step *= 2) edge(2, (*order)[j], (*order)[j + step]);
      }
    }
  }

  void add_clause(const logic::Clause& clause) {
    const auto& terms = problem_.terms;
    std::uint32_t literal_count = static_cast<std::uint32_t>(clause.literals.size());
    std::uint32_t weight = logic::clause_weight(terms, clause);
    std::uint32_t node = add_node(NodeKind::Clause, {flag(clause.from_goal), 0.0, flag(literal_count > 1), flag(literal_count > 2),
                                                     flag(literal_count > 4), flag(literal_count > 8), flag(weight > 4),
                                                     flag(weight > 16), flag(weight > 64), flag(weight > 256)});
    variable_base_ = static_cast<std::uint32_t>(rows_[static_cast<std::size_t>(NodeKind::Variable)].size());
    const std::uint32_t vars = logic::variable_count(terms, clause);
    for (std::uint32_t v = 0; v < vars; ++v) {
      std::uint32_t var_node = add_node(NodeKind::Variable, {static_cast<double>(v)});
      edge(3, var_node, node);
      edge(4, var_node, kSortIndividual);
    }
    for (const logic::Literal& lit : clause.literals) {
      std::uint32_t sub = add_subterm(lit.atom, static_cast<double>(lit.sign()), 0.0);
      edge(8, node, sub);
    }
  }

  std::uint32_t add_subterm(logic::TermId term, double sign, double position) {
    const logic::TermNode& t = problem_.terms[term];
    const double vars = t.variable_occurrences;
    const double w = t.weight;
    std::uint32_t node = add_node(NodeKind::Subterm, {sign, position, flag(vars > 0), flag(vars > 2), flag(vars > 4), flag(vars > 8),
                                                      flag(w > 1), flag(w > 4), flag(w > 16), flag(w > 64)});
    if (t.is_variable) {
      edge(5, node, variable_base_ + t.head);
      return node;
    }
    edge(6, node, t.head);
    const std::size_t k = t.args.size();
    for (std::size_t i = 0; i < k; ++i) {
      double pos = k > 1 ? static_cast<double>(i) / static_cast<double>(k - 1) : 0.0;
      std::uint32_t child = add_subterm(t.args[i], 0.0, pos);
      edge(7, node, child);
    }
    return node;
  }

  const logic::Problem& problem_;
  std::array<std::vector<double>, kNodeKinds> rows_;
  std::array<std::vector<Edge>, kEdgeKinds> edges_;
  std::uint32_t variable_base_ = 0;
};

}  // namespace

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Sort: return "sort";
    case NodeKind::Symbol: return "symbol";
    case NodeKind::Variable: return "variable";
    case NodeKind::Subterm: return "subterm";
    case NodeKind::Clause: return "clause";
  }
  return "?";
}

CnfGraph build_graph(const logic::Problem& problem) { return Builder(problem).build(); }

std::string dump_graph(const CnfGraph& graph) {
  std::ostringstream out;
  for (std::size_t k = 0; k < kNodeKinds; ++k) {
    const auto& f = graph.features[k];
    out << "nodes " << node_kind_name(static_cast<NodeKind>(k)) << " " << f.rows() << "\n";
    for (std::size_t r = 0; r < f.rows(); ++r) {
      out << "  " << r << ":";
      for (std::size_t c = 0; c < f.cols(); ++c) out << " " << f(r, c);
      out << "\n";
    }
  }
  for (std::size_t e = 0; e < kEdgeKinds; ++e) {
    out << "edges " << e + 1 << " " << graph.edges[e].size() << "\n";
    for (const Edge& edge : graph.edges[e]) out << "  " << edge.source << " -> " << edge.target << "\n";
  }
  return out.str();
}

}  // namespace saturn::graph
