#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "saturn/logic/problem.hpp"
#include "saturn/numerics/tensor.hpp"

namespace saturn::graph {

enum class NodeKind : std::uint8_t { Sort = 0, Symbol = 1, Variable = 2, Subterm = 3, Clause = 4 };
inline constexpr std::size_t kNodeKinds = 5;
inline constexpr std::array<std::size_t, kNodeKinds> kFeatureWidth{3, 10, 1, 10, 10};

std::string_view node_kind_name(NodeKind kind);

/// Edge kinds 1..8 are stored at indices 0..7.
inline constexpr std::size_t kEdgeKinds = 8;

struct EdgeKindInfo {
  NodeKind source;
  NodeKind target;
};

inline constexpr std::array<EdgeKindInfo, kEdgeKinds> kEdgeKindInfo{{
    {NodeKind::Symbol, NodeKind::Sort},        // 1: symbol to its output sort
    {NodeKind::Symbol, NodeKind::Symbol},      // 2: precedence chain and jumps
    {NodeKind::Variable, NodeKind::Clause},    // 3
    {NodeKind::Variable, NodeKind::Sort},      // 4
    {NodeKind::Subterm, NodeKind::Variable},   // 5: variable occurrence
    {NodeKind::Subterm, NodeKind::Symbol},     // 6: functor
    {NodeKind::Subterm, NodeKind::Subterm},    // 7: parent to argument
    {NodeKind::Clause, NodeKind::Subterm},     // 8: clause to literal
}};

inline constexpr std::uint32_t kSortIndividual = 0;
inline constexpr std::uint32_t kSortBoolean = 1;

struct Edge {
  std::uint32_t source;
  std::uint32_t target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Typed multigraph of an input CNF. Node indices are per kind. Symbol node
/// i is symbol id i and clause node i is input clause i.
struct CnfGraph {
  /// One row per node.
  std::array<numerics::Tensor, kNodeKinds> features;
  std::array<std::vector<Edge>, kEdgeKinds> edges;

  std::size_t count(NodeKind kind) const { return features[static_cast<std::size_t>(kind)].rows(); }
};

CnfGraph build_graph(const logic::Problem& problem);

/// Node tables and edge lists as text, one item per line.
std::string dump_graph(const CnfGraph& graph);

}  // namespace saturn::graph
