#include "saturn/logic/features.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace saturn::logic {

namespace {

void collect_symbols(const TermBank& terms, TermId term, std::set<SymbolId>& out) {
  const TermNode& node = terms[term];
  if (node.is_variable) return;
  out.insert(node.head);
  for (TermId a : node.args) collect_symbols(terms, a, out);
}

}  // namespace

std::uint32_t compute_sine_levels(Problem& problem) {
  const std::size_t n = problem.clauses.size();
  std::vector<std::vector<SymbolId>> clause_symbols(n);
  std::vector<std::uint32_t> generality(problem.symbols.size(), 0);
  for (std::size_t c = 0; c < n; ++c) {
    std::set<SymbolId> symbols;
    for (const Literal& lit : problem.clauses[c].literals) collect_symbols(problem.terms, lit.atom, symbols);
    clause_symbols[c].assign(symbols.begin(), symbols.end());
    if (!problem.clauses[c].from_goal) {
      for (SymbolId s : symbols) ++generality[s];
    }
  }

  // Clauses triggered by each symbol.
  std::vector<std::vector<std::size_t>> triggers(problem.symbols.size());
  for (std::size_t c = 0; c < n; ++c) {
    if (problem.clauses[c].from_goal || clause_symbols[c].empty()) continue;
    std::uint32_t least = std::numeric_limits<std::uint32_t>::max();
    for (SymbolId s : clause_symbols[c]) least = std::min(least, generality[s]);
    for (SymbolId s : clause_symbols[c]) {
      if (generality[s] <= least) triggers[s].push_back(c);
    }
  }

  for (Clause& clause : problem.clauses) clause.sine_level.reset();
  bool any_goal = std::any_of(problem.clauses.begin(), problem.clauses.end(), [](const Clause& c) { return c.from_goal; });
  if (!any_goal) {
    for (Clause& clause : problem.clauses) clause.sine_level = 0;
    return 0;
  }

  std::vector<std::optional<std::uint32_t>> symbol_level(problem.symbols.size());
  std::deque<SymbolId> frontier;
  for (std::size_t c = 0; c < n; ++c) {
    if (!problem.clauses[c].from_goal) continue;
    problem.clauses[c].sine_level = 0;
    for (SymbolId s : clause_symbols[c]) {
      if (!symbol_level[s]) {
        symbol_level[s] = 0;
        frontier.push_back(s);
      }
    }
  }
  std::uint32_t max_level = 0;
  while (!frontier.empty()) {
    SymbolId s = frontier.front();
    frontier.pop_front();
    std::uint32_t level = *symbol_level[s] + 1;
    for (std::size_t c : triggers[s]) {
      Clause& clause = problem.clauses[c];
      if (clause.sine_level) continue;
      clause.sine_level = level;
      max_level = std::max(max_level, level);
      for (SymbolId t : clause_symbols[c]) {
        if (!symbol_level[t]) {
          symbol_level[t] = level;
          frontier.push_back(t);
        }
      }
    }
  }
  return max_level;
}

FeatureContext feature_context(const Problem& problem) {
  FeatureContext ctx;
  ctx.equality_symbol = problem.symbols.equality_id();
  for (const Clause& c : problem.clauses) {
    if (c.sine_level) ctx.max_sine_level = std::max(ctx.max_sine_level, *c.sine_level);
  }
  return ctx;
}

SimpleFeatures simple_features(const Clause& clause, const TermBank& terms, const FeatureContext& context) {
  double weight = 0, var_occurrences = 0, positive = 0, negative = 0;
  bool all_eq = true, all_neq = true;
  for (const Literal& lit : clause.literals) {
    const TermNode& atom = terms[lit.atom];
    weight += atom.weight;
    var_occurrences += atom.variable_occurrences;
    (lit.positive ? positive : negative) += 1;
    bool equational = context.equality_symbol >= 0 && atom.head == static_cast<SymbolId>(context.equality_symbol);
    all_eq = all_eq && equational;
    all_neq = all_neq && !equational;
  }
  // Normalized by all term-node occurrences so the ratio stays in [0, 1].
  double occurrences = weight + var_occurrences;
  double var_norm = occurrences > 0 ? var_occurrences / occurrences : 0.0;

  bool sine_maxed = !clause.sine_level.has_value();
  double sine_norm = 1.0;
  if (!sine_maxed) {
    sine_norm = context.max_sine_level > 0 ? 0.5 * static_cast<double>(*clause.sine_level) / context.max_sine_level : 0.0;
  }

  return SimpleFeatures{
      static_cast<double>(clause.age),
      weight,
      positive,
      negative,
      all_eq ? 1.0 : 0.0,
      all_neq ? 1.0 : 0.0,
      var_occurrences,
      var_norm,
      clause.from_goal ? 1.0 : 0.0,
      sine_maxed ? 1.0 : 0.0,
      sine_norm,
      0.0,
  };
}

}  // namespace saturn::logic
