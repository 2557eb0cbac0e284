#include "saturn/prover/unify.hpp"

#include <unordered_map>
#include <utility>

namespace saturn::prover {

void Substitution::bind(VarIndex var, TermId term) {
  if (var >= bindings_.size()) bindings_.resize(var + 1);
  bindings_[var] = term;
}

bool Substitution::empty() const {
  for (const auto& b : bindings_) {
    if (b) return false;
  }
  return true;
}

std::vector<VarIndex> Substitution::domain() const {
  std::vector<VarIndex> out;
  for (VarIndex v = 0; v < bindings_.size(); ++v) {
    if (bindings_[v]) out.push_back(v);
  }
  return out;
}

TermId Substitution::apply(TermBank& bank, TermId term) const {
  std::unordered_map<TermId, TermId> memo;
  auto rec = [&](auto& self, TermId t) -> TermId {
    if (bank[t].max_variable < 0) return t;
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    TermId result;
    if (bank[t].is_variable) {
      auto bound = lookup(bank[t].head);
      result = bound ? self(self, *bound) : t;
    } else {
      std::vector<TermId> args = bank[t].args;
      bool changed = false;
      for (TermId& a : args) {
        TermId r = self(self, a);
        changed = changed || r != a;
        a = r;
      }
      result = changed ? bank.apply(bank[t].head, args) : t;
    }
    memo.emplace(t, result);
    return result;
  };
  return rec(rec, term);
}

namespace {

TermId deref(const TermBank& bank, const Substitution& subst, TermId t) {
  while (bank[t].is_variable) {
    auto bound = subst.lookup(bank[t].head);
    if (!bound) break;
    t = *bound;
  }
  return t;
}

bool occurs(const TermBank& bank, const Substitution& subst, VarIndex var, TermId t) {
  t = deref(bank, subst, t);
  const logic::TermNode& node = bank[t];
  if (node.is_variable) return node.head == var;
  if (node.max_variable < 0) return false;
  for (TermId a : node.args) {
    if (occurs(bank, subst, var, a)) return true;
  }
  return false;
}

}  // namespace

std::optional<Substitution> mgu(TermBank& bank, TermId a, TermId b) {
  Substitution subst;
  std::vector<std::pair<TermId, TermId>> todo{{a, b}};
  while (!todo.empty()) {
    auto [s, t] = todo.back();
    todo.pop_back();
    s = deref(bank, subst, s);
    t = deref(bank, subst, t);
    if (s == t) continue;
    const logic::TermNode& ns = bank[s];
    const logic::TermNode& nt = bank[t];
    if (ns.is_variable) {
      if (occurs(bank, subst, ns.head, t)) return std::nullopt;
      subst.bind(ns.head, t);
    } else if (nt.is_variable) {
      if (occurs(bank, subst, nt.head, s)) return std::nullopt;
      subst.bind(nt.head, s);
    } else {
      if (ns.head != nt.head || ns.args.size() != nt.args.size()) return std::nullopt;
      for (std::size_t i = ns.args.size(); i-- > 0;) todo.emplace_back(ns.args[i], nt.args[i]);
    }
  }

  Substitution resolved;
  for (VarIndex v : subst.domain()) resolved.bind(v, subst.apply(bank, *subst.lookup(v)));
  return resolved;
}

bool match(const TermBank& bank, TermId pattern, TermId target, std::vector<std::optional<TermId>>& bindings,
           std::vector<VarIndex>& trail) {
  const logic::TermNode& p = bank[pattern];
  if (p.is_variable) {
    if (p.head >= bindings.size()) bindings.resize(p.head + 1);
    if (bindings[p.head]) return *bindings[p.head] == target;
    bindings[p.head] = target;
    trail.push_back(p.head);
    return true;
  }
  if (p.max_variable < 0) return pattern == target;
  const logic::TermNode& t = bank[target];
  if (t.is_variable || t.head != p.head) return false;
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (!match(bank, p.args[i], t.args[i], bindings, trail)) return false;
  }
  return true;
}

}  // namespace saturn::prover
