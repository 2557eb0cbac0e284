#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace saturn::logic {

using SymbolId = std::uint32_t;
using TermId = std::uint32_t;
using VarIndex = std::uint32_t;

struct Symbol {
  SymbolId id = 0;
  std::string name;
  std::uint32_t arity = 0;
  bool is_predicate = false;
  bool is_equality = false;
  bool is_introduced = false;
  bool is_skolem = false;
};

/// Dense symbol table. Ids are assigned in order of first registration.
class SymbolTable {
 public:
  /// Returns the id of `name`, registering it if unseen. Throws
  /// std::invalid_argument when the name is already known with a different
  /// arity or kind.
  SymbolId intern(const std::string& name, std::uint32_t arity, bool is_predicate);
  SymbolId intern_equality();

  const Symbol& operator[](SymbolId id) const { return symbols_[id]; }
  Symbol& operator[](SymbolId id) { return symbols_[id]; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<Symbol>& all() const { return symbols_; }

  const Symbol* find(const std::string& name) const;
  /// Id of the equality predicate, or -1 when the problem has none.
  std::int64_t equality_id() const { return equality_; }

  /// Appends a fully specified symbol; its id must equal size().
  void add(Symbol symbol);

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::int64_t equality_ = -1;
};

struct TermNode {
  bool is_variable = false;
  /// Variable index for variables, symbol id otherwise.
  std::uint32_t head = 0;
  std::vector<TermId> args;
  /// Number of symbol occurrences (variables excluded).
  std::uint32_t weight = 0;
  std::uint32_t variable_occurrences = 0;
  /// Syntax tree height; variables and constants have height 1.
  std::uint32_t height = 1;
  /// Largest variable index occurring in the term, -1 when ground.
  std::int32_t max_variable = -1;
};

/// Hash-consed term storage: structurally identical terms get identical ids.
class TermBank {
 public:
  TermId variable(VarIndex index);
  TermId apply(SymbolId functor, std::span<const TermId> args);
  TermId apply(SymbolId functor, std::initializer_list<TermId> args) {
    return apply(functor, std::span<const TermId>(args.begin(), args.size()));
  }

  const TermNode& operator[](TermId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  /// Returns `term` with every variable index v replaced by v + offset.
  TermId shift_variables(TermId term, VarIndex offset);

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
  };
  TermId intern(std::vector<std::uint32_t> key, TermNode node);

  std::vector<TermNode> nodes_;
  std::unordered_map<std::vector<std::uint32_t>, TermId, KeyHash> index_;
};

}  // namespace saturn::logic
