#include "saturn/logic/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace saturn::logic {

SymbolId SymbolTable::intern(const std::string& name, std::uint32_t arity, bool is_predicate) {
  if (auto it = by_name_.find(name); it != by_name_.end()) {
    const Symbol& known = symbols_[it->second];
    if (known.arity != arity) {
      throw std::invalid_argument("symbol '" + name + "' used with arity " + std::to_string(arity) +
                                  " but previously with arity " + std::to_string(known.arity));
    }
    if (known.is_predicate != is_predicate) {
      throw std::invalid_argument("symbol '" + name + "' used both as predicate and as function");
    }
    return known.id;
  }
  Symbol symbol;
  symbol.id = static_cast<SymbolId>(symbols_.size());
  symbol.name = name;
  symbol.arity = arity;
  symbol.is_predicate = is_predicate;
  add(std::move(symbol));
  return static_cast<SymbolId>(symbols_.size() - 1);
}

SymbolId SymbolTable::intern_equality() {
  if (equality_ >= 0) return static_cast<SymbolId>(equality_);
  Symbol symbol;
  symbol.id = static_cast<SymbolId>(symbols_.size());
  symbol.name = "=";
  symbol.arity = 2;
  symbol.is_predicate = true;
  symbol.is_equality = true;
  add(std::move(symbol));
  return static_cast<SymbolId>(equality_);
}

const Symbol* SymbolTable::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &symbols_[it->second];
}

void SymbolTable::add(Symbol symbol) {
  if (symbol.id != symbols_.size()) throw std::invalid_argument("symbol ids must be contiguous");
  if (by_name_.contains(symbol.name)) throw std::invalid_argument("duplicate symbol '" + symbol.name + "'");
  if (symbol.is_equality) {
    if (equality_ >= 0) throw std::invalid_argument("duplicate equality symbol");
    if (symbol.arity != 2 || !symbol.is_predicate) throw std::invalid_argument("equality must be a binary predicate");
    equality_ = symbol.id;
  }
  by_name_.emplace(symbol.name, symbol.id);
  symbols_.push_back(std::move(symbol));
}

std::size_t TermBank::KeyHash::operator()(const std::vector<std::uint32_t>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::uint32_t v : key) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

TermId TermBank::intern(std::vector<std::uint32_t> key, TermNode node) {
  auto [it, inserted] = index_.try_emplace(std::move(key), static_cast<TermId>(nodes_.size()));
  if (inserted) nodes_.push_back(std::move(node));
  return it->second;
}

TermId TermBank::variable(VarIndex index) {
  TermNode node;
  node.is_variable = true;
  node.head = index;
  node.variable_occurrences = 1;
  node.max_variable = static_cast<std::int32_t>(index);
  return intern({0u, index}, std::move(node));
}

TermId TermBank::apply(SymbolId functor, std::span<const TermId> args) {
  std::vector<std::uint32_t> key;
  key.reserve(args.size() + 2);
  key.push_back(1u);
  key.push_back(functor);
  key.insert(key.end(), args.begin(), args.end());

  TermNode node;
  node.head = functor;
  node.args.assign(args.begin(), args.end());
  node.weight = 1;
  std::uint32_t child_height = 0;
  for (TermId a : args) {
    const TermNode& child = nodes_[a];
    node.weight += child.weight;
    node.variable_occurrences += child.variable_occurrences;
    node.max_variable = std::max(node.max_variable, child.max_variable);
    child_height = std::max(child_height, child.height);
  }
  node.height = child_height + 1;
  return intern(std::move(key), std::move(node));
}

TermId TermBank::shift_variables(TermId term, VarIndex offset) {
  if (offset == 0 || nodes_[term].max_variable < 0) return term;
  if (nodes_[term].is_variable) return variable(nodes_[term].head + offset);
  std::vector<TermId> args = nodes_[term].args;
  for (TermId& a : args) a = shift_variables(a, offset);
  return apply(nodes_[term].head, args);
}

}  // namespace saturn::logic
