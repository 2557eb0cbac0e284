#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "saturn/logic/clause.hpp"
#include "saturn/logic/term.hpp"

namespace saturn::logic {

enum class Role : std::uint8_t { Axiom, Hypothesis, NegatedConjecture };

std::string_view role_name(Role role);

/// A parsed CNF problem. Input clauses have ids equal to their position.
struct Problem {
  std::string name;
  SymbolTable symbols;
  TermBank terms;
  std::vector<Clause> clauses;
  std::vector<std::string> clause_names;
  std::vector<Role> roles;

  /// Copies terms and clauses into a fresh store for a proof attempt.
  ClauseStore make_store() const { return ClauseStore{terms, clauses}; }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the `cnf(name, role, formula).` subset of TPTP.
Problem parse_problem(std::string_view text, std::string name = {});
Problem load_problem(const std::string& path);

/// Parses a bare disjunction (or `$false`) against an existing symbol table.
/// Unknown symbols are an error. Variables are numbered by first occurrence.
std::vector<Literal> parse_literals(std::string_view text, const SymbolTable& symbols, TermBank& terms);

std::string format_term(const SymbolTable& symbols, const TermBank& terms, TermId term);
std::string format_literal(const SymbolTable& symbols, const TermBank& terms, const Literal& literal);
/// Disjunction with `|`, or `$false` for the empty clause.
std::string format_literals(const SymbolTable& symbols, const TermBank& terms, const std::vector<Literal>& literals);
/// Quotes a name unless it is a TPTP lower word.
std::string format_name(std::string_view name);

/// Canonical TPTP rendering, one `cnf(...)` line per clause.
void print_problem(std::ostream& out, const Problem& problem);
std::string print_problem(const Problem& problem);

}  // namespace saturn::logic
