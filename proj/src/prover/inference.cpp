#include "saturn/prover/inference.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace saturn::prover {

namespace {

TermId rename(TermBank& bank, TermId term, std::unordered_map<VarIndex, VarIndex>& mapping) {
  if (bank[term].max_variable < 0) return term;
  if (bank[term].is_variable) {
    auto [it, inserted] = mapping.try_emplace(bank[term].head, static_cast<VarIndex>(mapping.size()));
    return bank.variable(it->second);
  }
  std::vector<TermId> args = bank[term].args;
  for (TermId& a : args) a = rename(bank, a, mapping);
  return bank.apply(bank[term].head, args);
}

std::uint64_t literal_key(const Literal& lit) { return (static_cast<std::uint64_t>(lit.atom) << 1) | (lit.positive ? 1u : 0u); }

}  // namespace

std::vector<Literal> normalize_variables(TermBank& bank, const std::vector<Literal>& literals) {
  std::unordered_map<VarIndex, VarIndex> mapping;
  std::vector<Literal> out;
  out.reserve(literals.size());
  for (const Literal& lit : literals) out.push_back(Literal{lit.positive, rename(bank, lit.atom, mapping)});
  return out;
}

std::vector<Literal> instantiate_literals(TermBank& bank, const std::vector<Literal>& literals, const Substitution& subst) {
  std::vector<Literal> out;
  out.reserve(literals.size());
  std::unordered_set<std::uint64_t> seen;
  for (const Literal& lit : literals) {
    Literal inst{lit.positive, subst.apply(bank, lit.atom)};
    if (seen.insert(literal_key(inst)).second) out.push_back(inst);
  }
  return normalize_variables(bank, out);
}

std::optional<Clause> resolve(TermBank& bank, const Clause& c1, std::size_t i1, const Clause& c2, std::size_t i2) {
  const Literal& l1 = c1.literals.at(i1);
  const Literal& l2 = c2.literals.at(i2);
  if (l1.positive == l2.positive) return std::nullopt;
  if (bank[l1.atom].head != bank[l2.atom].head) return std::nullopt;

  VarIndex offset = logic::variable_count(bank, c1);
  TermId shifted = bank.shift_variables(l2.atom, offset);
  auto unifier = mgu(bank, l1.atom, shifted);
  if (!unifier) return std::nullopt;

  std::vector<Literal> rest;
  rest.reserve(c1.literals.size() + c2.literals.size() - 2);
  for (std::size_t i = 0; i < c1.literals.size(); ++i) {
    if (i != i1) rest.push_back(c1.literals[i]);
  }
  for (std::size_t i = 0; i < c2.literals.size(); ++i) {
    if (i != i2) rest.push_back(Literal{c2.literals[i].positive, bank.shift_variables(c2.literals[i].atom, offset)});
  }

  Clause out;
  out.literals = instantiate_literals(bank, rest, *unifier);
  out.rule = logic::Rule::Resolution;
  out.parents = {c1.id, c2.id};
  return out;
}

std::vector<Clause> factor(TermBank& bank, const Clause& clause) {
  std::vector<Clause> out;
  const auto& lits = clause.literals;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (lits[i].positive != lits[j].positive || bank[lits[i].atom].head != bank[lits[j].atom].head) continue;
      auto unifier = mgu(bank, lits[i].atom, lits[j].atom);
      if (!unifier) continue;
      Clause f;
      f.literals = instantiate_literals(bank, lits, *unifier);
      f.rule = logic::Rule::Factoring;
      f.parents = {clause.id};
      out.push_back(std::move(f));
    }
  }
  return out;
}

bool is_tautology(const Clause& clause) {
  std::unordered_set<TermId> positive;
  for (const Literal& lit : clause.literals) {
    if (lit.positive) positive.insert(lit.atom);
  }
  return std::any_of(clause.literals.begin(), clause.literals.end(),
                     [&](const Literal& lit) { return !lit.positive && positive.contains(lit.atom); });
}

namespace {

struct SubsumptionSearch {
  const TermBank& bank;
  const Clause& general;
  const Clause& specific;
  /// General literal indices, most constrained first.
  std::vector<std::size_t> order;
  /// Per general literal, the specific literals it matches on its own.
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<bool> used;
  std::vector<std::optional<TermId>> bindings;
  std::vector<VarIndex> trail;
  std::size_t& effort_left;

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      bindings[trail.back()].reset();
      trail.pop_back();
    }
  }

  bool search(std::size_t depth) {
    if (depth == order.size()) return true;
    const Literal& g = general.literals[order[depth]];
    for (std::size_t k : candidates[order[depth]]) {
      if (used[k]) continue;
      if (effort_left == 0) return false;
      --effort_left;
      std::size_t mark = trail.size();
      if (match(bank, g.atom, specific.literals[k].atom, bindings, trail)) {
        used[k] = true;
        if (search(depth + 1)) return true;
        used[k] = false;
      }
      undo(mark);
      if (effort_left == 0) return false;
    }
    return false;
  }
};

}  // namespace

bool subsumes(const TermBank& bank, const Clause& general, const Clause& specific) {
  std::size_t effort = kSubsumptionEffort;
  return subsumes(bank, general, specific, effort);
}

bool subsumes(const TermBank& bank, const Clause& general, const Clause& specific, std::size_t& effort_left) {
  if (general.literals.size() > specific.literals.size()) return false;
  // Instances never weigh less than their generalizations.
  if (logic::clause_weight(bank, general) > logic::clause_weight(bank, specific)) return false;
  SubsumptionSearch s{bank, general, specific, {}, {}, {}, {}, {}, effort_left};
  s.candidates.resize(general.literals.size());
  for (std::size_t i = 0; i < general.literals.size(); ++i) {
    const Literal& g = general.literals[i];
    for (std::size_t k = 0; k < specific.literals.size(); ++k) {
      const Literal& lit = specific.literals[k];
      if (lit.positive != g.positive || bank[lit.atom].head != bank[g.atom].head) continue;
      if (effort_left == 0) return false;
      --effort_left;
      if (match(bank, g.atom, lit.atom, s.bindings, s.trail)) s.candidates[i].push_back(k);
      s.undo(0);
    }
    if (s.candidates[i].empty()) return false;
    s.order.push_back(i);
  }
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](std::size_t a, std::size_t b) { return s.candidates[a].size() < s.candidates[b].size(); });
  s.used.assign(specific.literals.size(), false);
  return s.search(0);
}

}  // namespace saturn::prover
