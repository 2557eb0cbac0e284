#include "saturn/logic/clause.hpp"

#include <algorithm>
#include <stdexcept>

namespace saturn::logic {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::Input: return "input";
    case Rule::Resolution: return "resolution";
    case Rule::Factoring: return "factoring";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  if (name == "input") return Rule::Input;
  if (name == "resolution") return Rule::Resolution;
  if (name == "factoring") return Rule::Factoring;
  throw std::invalid_argument("unknown inference rule '" + std::string(name) + "'");
}

std::uint32_t variable_count(const TermBank& bank, const Clause& clause) {
  std::int32_t max_var = -1;
  for (const Literal& lit : clause.literals) max_var = std::max(max_var, bank[lit.atom].max_variable);
  return static_cast<std::uint32_t>(max_var + 1);
}

std::uint32_t clause_weight(const TermBank& bank, const Clause& clause) {
  std::uint32_t w = 0;
  for (const Literal& lit : clause.literals) w += bank[lit.atom].weight;
  return w;
}

void inherit_from_parents(Clause& derived, const std::vector<Clause>& store) {
  std::uint32_t max_age = 0;
  bool goal = false;
  std::optional<std::uint32_t> level;
  for (ClauseId p : derived.parents) {
    const Clause& parent = store.at(p);
    max_age = std::max(max_age, parent.age);
    goal = goal || parent.from_goal;
    if (parent.sine_level && (!level || *parent.sine_level < *level)) level = parent.sine_level;
  }
  derived.age = derived.parents.empty() ? 0 : max_age + 1;
  derived.from_goal = goal;
  derived.sine_level = level;
}

}  // namespace saturn::logic
