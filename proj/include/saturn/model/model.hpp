#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "saturn/graph/cnf_graph.hpp"
#include "saturn/logic/clause.hpp"
#include "saturn/logic/features.hpp"
#include "saturn/numerics/tape.hpp"

namespace saturn::model {

using numerics::Parameter;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

struct HyperParams {
  /// Embedding size.
  std::uint32_t n = 32;
  /// Hidden size of the combine and head MLPs.
  std::uint32_t m = 256;
  /// Message-passing rounds.
  std::uint32_t k = 8;
  /// Inference-rule vocabulary.
  std::uint32_t r = logic::kRuleVocabulary;
  /// Simple-feature count.
  std::uint32_t f = logic::kSimpleFeatureCount;

  /// Throws std::invalid_argument for unusable values.
  void validate() const;
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Directed edge kinds seen by message passing: forward and reverse of each
/// of the 8 graph edge kinds.
inline constexpr std::size_t kDirectedEdgeKinds = 2 * graph::kEdgeKinds;

struct Affine {
  Parameter weight;
  Parameter bias;
};

/// Single-hidden-layer MLP followed by LayerNorm.
struct CombineMlp {
  Parameter w1, b1, w3, b3, ln_gain, ln_bias;
};

/// All learnable tensors. Shapes (n, m, k, r, f from HyperParams; w_k is the
/// feature width of node kind k):
///   embed[k]            weight n x w_k, bias n x 1
///   kernels             per round, per directed edge kind: self n x n, neighbour n x n
///   promote_symbol      n x n, n x 1
///   promote_clause      n x n, n x 1
///   rules               n x r
///   gage                w1 m x 3n, b1 m x 1, w3 n x m, b3 n x 1, LayerNorm n x 1 twice
///   variable            n x 1
///   gweight             w1 m x (3n+1), b1 m x 1, w3 n x m, b3 n x 1, LayerNorm n x 1 twice
///   head_hidden         m x (2n+f), m x 1
///   head_out            m x 1
struct Model {
  HyperParams hp;
  std::array<Affine, graph::kNodeKinds> embed;
  std::vector<Parameter> kernels;
  Affine promote_symbol;
  Affine promote_clause;
  Parameter rules;
  CombineMlp gage;
  Parameter variable;
  CombineMlp gweight;
  Affine head_hidden;
  Parameter head_out;

  /// Every parameter in the fixed serialization order.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t scalar_count() const;
  void zero_grad();

  Parameter& kernel(std::uint32_t round, std::size_t directed_kind, bool neighbour) {
    return kernels[(round * kDirectedEdgeKinds + directed_kind) * 2 + (neighbour ? 1 : 0)];
  }
};

/// Weights uniform in +-sqrt(1/fan_in), biases 0, LayerNorm gain 1 and bias 0.
Model init_model(const HyperParams& hp, std::uint64_t seed);

/// Model parameters bound to one tape.
struct ModelVars {
  ModelVars(Tape& tape, Model& model);
  ModelVars(Tape& tape, const Model& model);

  HyperParams hp;
  std::array<std::pair<Var, Var>, graph::kNodeKinds> embed;
  std::vector<std::pair<Var, Var>> kernels;
  std::pair<Var, Var> promote_symbol, promote_clause;
  Var rules;
  std::array<Var, 6> gage;
  Var variable;
  std::array<Var, 6> gweight;
  std::pair<Var, Var> head_hidden;
  Var head_out;

 private:
  void assign(const std::vector<Var>& vars);
};

/// Thrown by load_model for unreadable files.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Binary layout: magic "SATM", u32 version, u32 n, m, k, r, f, then for each
/// parameter in order: u32 name length, name, u32 rows, u32 cols and
/// rows*cols little-endian float64 values.
void save_model(std::ostream& out, const Model& model);
void save_model(const std::string& path, const Model& model);
Model load_model(std::istream& in);
Model load_model(const std::string& path);

}  // namespace saturn::model
