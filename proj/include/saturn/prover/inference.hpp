#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "saturn/logic/clause.hpp"
#include "saturn/prover/unify.hpp"

namespace saturn::prover {

using logic::Clause;
using logic::ClauseId;
using logic::Literal;

/// Applies `subst` to every literal, drops repeated literals (first copy
/// wins) and renumbers variables by first occurrence.
std::vector<Literal> instantiate_literals(TermBank& bank, const std::vector<Literal>& literals, const Substitution& subst);

/// Renumbers variables by first occurrence, left to right, depth first.
std::vector<Literal> normalize_variables(TermBank& bank, const std::vector<Literal>& literals);

/// Binary resolution of c1[i1] against c2[i2]. The second premise is renamed
/// apart internally. Only literals and parents are filled; the caller
/// assigns id and inherited metadata.
std::optional<Clause> resolve(TermBank& bank, const Clause& c1, std::size_t i1, const Clause& c2, std::size_t i2);

/// All factors obtained by unifying one pair of same-polarity literals.
std::vector<Clause> factor(TermBank& bank, const Clause& clause);

/// True when the clause contains some atom both positively and negatively.
bool is_tautology(const Clause& clause);

/// Match attempts after which a subsumption search gives up.
inline constexpr std::size_t kSubsumptionEffort = 20000;

/// Multiset subsumption: an injective literal map under one substitution.
/// Answers false when the search runs out of effort, which only keeps a
/// redundant clause.
bool subsumes(const TermBank& bank, const Clause& general, const Clause& specific);
/// Same, drawing match attempts from a budget shared across calls.
bool subsumes(const TermBank& bank, const Clause& general, const Clause& specific, std::size_t& effort_left);

}  // namespace saturn::prover
