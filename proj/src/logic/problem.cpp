#include "saturn/logic/problem.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace saturn::logic {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Axiom: return "axiom";
    case Role::Hypothesis: return "hypothesis";
    case Role::NegatedConjecture: return "negated_conjecture";
  }
  return "axiom";
}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { LowerWord, UpperWord, Quoted, DollarWord, Number, LParen, RParen, Comma, Dot, Pipe, Tilde, Equals, NotEquals, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_layout();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    auto is_alnum = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)) || c == '$') {
      std::size_t start = pos_;
      advance();
      while (pos_ < text_.size() && is_alnum(text_[pos_])) advance();
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.kind = c == '$' ? Tok::DollarWord : std::isupper(static_cast<unsigned char>(c)) ? Tok::UpperWord : Tok::LowerWord;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_alnum(text_[pos_])) advance();
      tok.text = std::string(text_.substr(start, pos_ - start));
      tok.kind = Tok::Number;
      return tok;
    }
    if (c == '\'') {
      advance();
      std::string value;
      while (true) {
        if (pos_ >= text_.size()) throw ParseError("unterminated quoted name", tok.line, tok.column);
        char ch = text_[pos_];
        advance();
        if (ch == '\\' && pos_ < text_.size()) {
          value.push_back(text_[pos_]);
          advance();
        } else if (ch == '\'') {
          break;
        } else {
          value.push_back(ch);
        }
      }
      if (value.empty()) throw ParseError("empty quoted name", tok.line, tok.column);
      tok.text = std::move(value);
      tok.kind = Tok::Quoted;
      return tok;
    }
    advance();
    switch (c) {
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case ',': tok.kind = Tok::Comma; break;
      case '.': tok.kind = Tok::Dot; break;
      case '|': tok.kind = Tok::Pipe; break;
      case '~': tok.kind = Tok::Tilde; break;
      case '=': tok.kind = Tok::Equals; break;
      case '!':
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          tok.kind = Tok::NotEquals;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tok.line, tok.column);
    }
    tok.text = std::string(1, c);
    return tok;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_layout() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        std::size_t line = line_, column = column_;
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= text_.size()) throw ParseError("unterminated comment", line, column);
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct RawTerm {
  std::string name;
  bool variable = false;
  std::vector<RawTerm> args;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RawLiteral {
  bool positive = true;
  bool equality = false;
  RawTerm atom;  // lhs for equalities
  RawTerm rhs;
};

class Parser {
 public:
  Parser(std::string_view text, SymbolTable& symbols, TermBank& terms, bool allow_new_symbols)
      : lexer_(text), symbols_(symbols), terms_(terms), allow_new_(allow_new_symbols) {
    shift();
  }

  void parse_problem(Problem& problem) {
    while (tok_.kind != Tok::End) {
      if (tok_.kind != Tok::LowerWord) fail("expected 'cnf'");
      if (tok_.text == "include") fail("include directives are not supported");
      if (tok_.text == "fof" || tok_.text == "tff" || tok_.text == "thf" || tok_.text == "tcf") {
        fail("unsupported formula kind '" + tok_.text + "', only cnf is accepted");
      }
      if (tok_.text != "cnf") fail("expected 'cnf', found '" + tok_.text + "'");
      shift();
      expect(Tok::LParen, "'('");
      if (tok_.kind != Tok::LowerWord && tok_.kind != Tok::Quoted && tok_.kind != Tok::Number &&
          tok_.kind != Tok::UpperWord) {
        fail("expected clause name");
      }
      std::string name = tok_.text;
      shift();
      expect(Tok::Comma, "','");
      if (tok_.kind != Tok::LowerWord) fail("expected role");
      Role role;
      if (tok_.text == "axiom") {
        role = Role::Axiom;
      } else if (tok_.text == "hypothesis") {
        role = Role::Hypothesis;
      } else if (tok_.text == "negated_conjecture") {
        role = Role::NegatedConjecture;
      } else {
        fail("unsupported role '" + tok_.text + "'");
      }
      shift();
      expect(Tok::Comma, "','");
      std::vector<Literal> literals = parse_formula();
      expect(Tok::RParen, "')'");
      if (tok_.kind == Tok::Comma) fail("annotations after the formula are not supported");
      expect(Tok::Dot, "'.'");

      Clause clause;
      clause.id = static_cast<ClauseId>(problem.clauses.size());
      clause.literals = std::move(literals);
      clause.from_goal = role == Role::NegatedConjecture;
      problem.clauses.push_back(std::move(clause));
      problem.clause_names.push_back(std::move(name));
      problem.roles.push_back(role);
    }
  }

  std::vector<Literal> parse_standalone_formula() {
    std::vector<Literal> literals = parse_formula();
    if (tok_.kind != Tok::End) fail("trailing input after formula");
    return literals;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, tok_.line, tok_.column); }

  void shift() { tok_ = lexer_.next(); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    shift();
  }

  std::vector<Literal> parse_formula() {
    variables_.clear();
    std::vector<RawLiteral> raw;
    parse_disjunction(raw);
    std::vector<Literal> literals;
    literals.reserve(raw.size());
    for (const RawLiteral& lit : raw) literals.push_back(intern_literal(lit));
    return literals;
  }

  void parse_disjunction(std::vector<RawLiteral>& out) {
    parse_disjunct(out);
    while (tok_.kind == Tok::Pipe) {
      shift();
      parse_disjunct(out);
    }
  }

  void parse_disjunct(std::vector<RawLiteral>& out) {
    if (tok_.kind == Tok::LParen) {
      shift();
      parse_disjunction(out);
      expect(Tok::RParen, "')'");
      return;
    }
    if (tok_.kind == Tok::DollarWord && tok_.text == "$false") {
      shift();
      return;
    }
    RawLiteral lit;
    if (tok_.kind == Tok::Tilde) {
      shift();
      lit.positive = false;
    }
    if (tok_.kind == Tok::DollarWord) fail("unsupported interpreted symbol '" + tok_.text + "'");
    lit.atom = parse_term();
    if (tok_.kind == Tok::Equals || tok_.kind == Tok::NotEquals) {
      if (tok_.kind == Tok::NotEquals) lit.positive = !lit.positive;
      shift();
      lit.equality = true;
      lit.rhs = parse_term();
    }
    out.push_back(std::move(lit));
  }

  RawTerm parse_term() {
    RawTerm term;
    term.line = tok_.line;
    term.column = tok_.column;
    switch (tok_.kind) {
      case Tok::UpperWord:
        term.variable = true;
        term.name = tok_.text;
        shift();
        return term;
      case Tok::LowerWord:
      case Tok::Quoted:
        term.name = tok_.text;
        shift();
        break;
      case Tok::Number: fail("arithmetic is not supported");
      case Tok::DollarWord: fail("unsupported interpreted symbol '" + tok_.text + "'");
      default: fail("expected a term");
    }
    if (tok_.kind == Tok::LParen) {
      shift();
      term.args.push_back(parse_term());
      while (tok_.kind == Tok::Comma) {
        shift();
        term.args.push_back(parse_term());
      }
      expect(Tok::RParen, "')' or ','");
    }
    return term;
  }

  SymbolId resolve_symbol(const RawTerm& term, bool predicate) {
    auto arity = static_cast<std::uint32_t>(term.args.size());
    if (allow_new_) {
      try {
        return symbols_.intern(term.name, arity, predicate);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), term.line, term.column);
      }
    }
    const Symbol* symbol = symbols_.find(term.name);
    if (symbol == nullptr || symbol->is_equality) {
      throw ParseError("unknown symbol '" + term.name + "'", term.line, term.column);
    }
    if (symbol->arity != arity || symbol->is_predicate != predicate) {
      throw ParseError("symbol '" + term.name + "' used inconsistently with its declaration", term.line, term.column);
    }
    return symbol->id;
  }

  TermId intern_term(const RawTerm& term) {
    if (term.variable) {
      auto [it, inserted] = variables_.try_emplace(term.name, static_cast<VarIndex>(variables_.size()));
      return terms_.variable(it->second);
    }
    SymbolId functor = resolve_symbol(term, false);
    std::vector<TermId> args;
    args.reserve(term.args.size());
    for (const RawTerm& a : term.args) args.push_back(intern_term(a));
    return terms_.apply(functor, args);
  }

  Literal intern_literal(const RawLiteral& lit) {
    if (lit.equality) {
      SymbolId eq;
      if (allow_new_) {
        eq = symbols_.intern_equality();
      } else if (symbols_.equality_id() >= 0) {
        eq = static_cast<SymbolId>(symbols_.equality_id());
      } else {
        throw ParseError("equality not declared", lit.atom.line, lit.atom.column);
      }
      TermId lhs = intern_term(lit.atom);
      TermId rhs = intern_term(lit.rhs);
      return Literal{lit.positive, terms_.apply(eq, {lhs, rhs})};
    }
    if (lit.atom.variable) throw ParseError("variable used as an atom", lit.atom.line, lit.atom.column);
    SymbolId pred = resolve_symbol(lit.atom, true);
    std::vector<TermId> args;
    args.reserve(lit.atom.args.size());
    for (const RawTerm& a : lit.atom.args) args.push_back(intern_term(a));
    return Literal{lit.positive, terms_.apply(pred, args)};
  }

  Lexer lexer_;
  Token tok_;
  SymbolTable& symbols_;
  TermBank& terms_;
  bool allow_new_;
  std::map<std::string, VarIndex> variables_;
};

bool is_lower_word(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

void format_term_into(std::string& out, const SymbolTable& symbols, const TermBank& terms, TermId id) {
  const TermNode& node = terms[id];
  if (node.is_variable) {
    out += 'X';
    out += std::to_string(node.head);
    return;
  }
  out += format_name(symbols[node.head].name);
  if (node.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < node.args.size(); ++i) {
    if (i > 0) out += ',';
    format_term_into(out, symbols, terms, node.args[i]);
  }
  out += ')';
}

}  // namespace

Problem parse_problem(std::string_view text, std::string name) {
  Problem problem;
  problem.name = std::move(name);
  Parser parser(text, problem.symbols, problem.terms, true);
  parser.parse_problem(problem);
  return problem;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_problem(buffer.str(), name);
}

std::vector<Literal> parse_literals(std::string_view text, const SymbolTable& symbols, TermBank& terms) {
  // The parser only reads the table when new symbols are disallowed.
  Parser parser(text, const_cast<SymbolTable&>(symbols), terms, false);
  return parser.parse_standalone_formula();
}

std::string format_name(std::string_view name) {
  if (is_lower_word(name)) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string format_term(const SymbolTable& symbols, const TermBank& terms, TermId term) {
  std::string out;
  format_term_into(out, symbols, terms, term);
  return out;
}

std::string format_literal(const SymbolTable& symbols, const TermBank& terms, const Literal& literal) {
  const TermNode& atom = terms[literal.atom];
  if (symbols[atom.head].is_equality) {
    return format_term(symbols, terms, atom.args[0]) + (literal.positive ? " = " : " != ") +
           format_term(symbols, terms, atom.args[1]);
  }
  std::string out = literal.positive ? "" : "~";
  format_term_into(out, symbols, terms, literal.atom);
  return out;
}

std::string format_literals(const SymbolTable& symbols, const TermBank& terms, const std::vector<Literal>& literals) {
  if (literals.empty()) return "$false";
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i > 0) out += " | ";
    out += format_literal(symbols, terms, literals[i]);
  }
  return out;
}

void print_problem(std::ostream& out, const Problem& problem) {
  for (std::size_t i = 0; i < problem.clauses.size(); ++i) {
    Role role = i < problem.roles.size() ? problem.roles[i]
                : problem.clauses[i].from_goal ? Role::NegatedConjecture
                                               : Role::Axiom;
    std::string name = i < problem.clause_names.size() ? problem.clause_names[i] : "c" + std::to_string(i);
    out << "cnf(" << format_name(name) << ", " << role_name(role) << ", ("
        << format_literals(problem.symbols, problem.terms, problem.clauses[i].literals) << ")).\n";
  }
}

std::string print_problem(const Problem& problem) {
  std::ostringstream out;
  print_problem(out, problem);
  return out.str();
}

}  // namespace saturn::logic
