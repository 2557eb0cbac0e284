#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saturn/logic/term.hpp"

namespace saturn::logic {

using ClauseId = std::uint32_t;

/// Inference rules known to the prover. The numeric value indexes the rule
/// embedding table of the model, which reserves kRuleVocabulary slots.
enum class Rule : std::uint8_t {
  Input = 0,
  Resolution = 1,
  Factoring = 2,
};

inline constexpr std::uint32_t kRuleVocabulary = 8;

std::string_view rule_name(Rule rule);
/// Throws std::invalid_argument for unknown names.
Rule parse_rule(std::string_view name);

struct Literal {
  bool positive = true;
  TermId atom = 0;

  int sign() const { return positive ? 1 : -1; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  ClauseId id = 0;
  std::vector<Literal> literals;
  std::uint32_t age = 0;
  Rule rule = Rule::Input;
  /// Main premise first.
  std::vector<ClauseId> parents;
  bool from_goal = false;
  std::optional<std::uint32_t> sine_level;

  bool empty() const { return literals.empty(); }
};

/// Number of distinct variable slots, i.e. one past the largest index.
std::uint32_t variable_count(const TermBank& bank, const Clause& clause);
std::uint32_t clause_weight(const TermBank& bank, const Clause& clause);

/// Fills age, from_goal and sine_level of a derived clause from its parents.
void inherit_from_parents(Clause& derived, const std::vector<Clause>& store);

/// Terms plus clauses indexed by ClauseId.
struct ClauseStore {
  TermBank terms;
  std::vector<Clause> clauses;

  const Clause& operator[](ClauseId id) const { return clauses[id]; }
  Clause& operator[](ClauseId id) { return clauses[id]; }
  std::size_t size() const { return clauses.size(); }

  ClauseId add(Clause clause) {
    clause.id = static_cast<ClauseId>(clauses.size());
    clauses.push_back(std::move(clause));
    return clauses.back().id;
  }
};

}  // namespace saturn::logic
