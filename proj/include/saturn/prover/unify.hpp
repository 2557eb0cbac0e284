#pragma once

#include <optional>
#include <vector>

#include "saturn/logic/term.hpp"

namespace saturn::prover {

using logic::TermBank;
using logic::TermId;
using logic::VarIndex;

/// Variable bindings indexed by variable index.
class Substitution {
 public:
  std::optional<TermId> lookup(VarIndex var) const {
    return var < bindings_.size() ? bindings_[var] : std::nullopt;
  }
  void bind(VarIndex var, TermId term);
  bool empty() const;
  /// Bound variables in increasing index order.
  std::vector<VarIndex> domain() const;

  /// Applies the bindings transitively until no bound variable remains.
  TermId apply(TermBank& bank, TermId term) const;

 private:
  std::vector<std::optional<TermId>> bindings_;
};

/// Most general unifier of `a` and `b` with occurs check. The result is
/// idempotent: no bound variable occurs in any binding.
std::optional<Substitution> mgu(TermBank& bank, TermId a, TermId b);

/// One-way matching: extends `bindings` so that pattern·bindings == target.
/// Variables of the target are treated as constants. On failure `bindings`
/// may hold partial entries; callers keep a copy or use the trail.
bool match(const TermBank& bank, TermId pattern, TermId target, std::vector<std::optional<TermId>>& bindings,
           std::vector<VarIndex>& trail);

}  // namespace saturn::prover
