#include "saturn/prover/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "saturn/logic/features.hpp"

namespace saturn::prover {

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Refutation: return "refutation";
    case Outcome::Saturated: return "saturated";
    case Outcome::ResourceOut: return "resource_out";
  }
  return "unknown";
}

Outcome parse_outcome(std::string_view name) {
  if (name == "refutation") return Outcome::Refutation;
  if (name == "saturated") return Outcome::Saturated;
  if (name == "resource_out") return Outcome::ResourceOut;
  throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

std::size_t Trace::input_count() const {
  std::size_t n = 0;
  while (n < clauses.size() && clauses[n].clause.rule == logic::Rule::Input) ++n;
  return n;
}

std::size_t Trace::index_of(ClauseId id) const {
  auto it = std::lower_bound(clauses.begin(), clauses.end(), id,
                             [](const TraceClause& c, ClauseId v) { return c.clause.id < v; });
  if (it == clauses.end() || it->clause.id != id) {
    throw std::out_of_range("clause " + std::to_string(id) + " not in trace");
  }
  return static_cast<std::size_t>(it - clauses.begin());
}

logic::Problem Trace::input_problem() const {
  logic::Problem problem;
  problem.name = problem_id;
  problem.symbols = symbols;
  problem.terms = terms;
  std::size_t n = input_count();
  for (std::size_t i = 0; i < n; ++i) {
    problem.clauses.push_back(clauses[i].clause);
    problem.clause_names.push_back("c" + std::to_string(i));
    problem.roles.push_back(clauses[i].clause.from_goal ? logic::Role::NegatedConjecture : logic::Role::Axiom);
  }
  return problem;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string join_ids(const std::vector<ClauseId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string& message) {
  throw std::runtime_error("trace line " + std::to_string(line) + ": " + message);
}

std::uint64_t parse_u64(std::string_view text, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) malformed(line, "bad integer '" + std::string(text) + "'");
  return v;
}

double parse_double(std::string_view text, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) malformed(line, "bad number '" + std::string(text) + "'");
  return v;
}

std::vector<ClauseId> parse_ids(std::string_view text, std::size_t line) {
  std::vector<ClauseId> out;
  if (text.empty() || text == "-") return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(static_cast<ClauseId>(parse_u64(part, line)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string unquote(std::string_view text, std::size_t line) {
  if (text.size() < 2 || text.front() != '\'') return std::string(text);
  if (text.back() != '\'') malformed(line, "unterminated quoted name");
  std::string out;
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    if (text[i] == '\\' && i + 2 < text.size()) ++i;
    out += text[i];
  }
  return out;
}

std::map<std::string, std::string> parse_fields(std::istringstream& in) {
  std::map<std::string, std::string> fields;
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return fields;
}

std::string rest_of(std::istringstream& in) {
  std::string rest;
  std::getline(in, rest);
  auto first = rest.find_first_not_of(' ');
  return first == std::string::npos ? std::string() : rest.substr(first);
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << "saturn-trace " << kTraceFormatVersion << '\n';
  out << "problem " << trace.problem_id << '\n';
  out << "settings mode=" << trace.settings.mode << " seed=" << trace.settings.seed
      << " temperature=" << format_double(trace.settings.temperature) << " budget=" << trace.settings.budget
      << " shuffle=" << (trace.settings.shuffle ? 1 : 0) << '\n';
  for (const logic::Symbol& s : trace.symbols.all()) {
    std::string flags;
    if (s.is_equality) flags += 'e';
    if (s.is_introduced) flags += 'i';
    if (s.is_skolem) flags += 's';
    if (flags.empty()) flags = "-";
    out << "symbol " << s.id << ' ' << s.arity << ' ' << (s.is_predicate ? "pred" : "func") << ' ' << flags << ' '
        << logic::format_name(s.name) << '\n';
  }
  for (const TraceClause& tc : trace.clauses) {
    const Clause& c = tc.clause;
    std::string flags;
    if (c.from_goal) flags += 'g';
    if (tc.deleted) flags += 'd';
    if (flags.empty()) flags = "-";
    out << "clause " << c.id << ' ' << logic::rule_name(c.rule) << ' ' << (c.parents.empty() ? "-" : join_ids(c.parents))
        << ' ' << flags << " [" << logic::format_literals(trace.symbols, trace.terms, c.literals) << "]\n";
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const SelectionStep& s = trace.steps[i];
    out << "step " << (i + 1) << ' ' << s.selected << " +" << join_ids(s.added) << " -" << join_ids(s.removed) << '\n';
  }
  out << "outcome " << outcome_name(trace.outcome) << '\n';
  out << "proof " << (trace.proof.empty() ? "-" : join_ids(trace.proof)) << '\n';
  const SaturationStats& st = trace.stats;
  out << "stats activations=" << st.activations << " generated=" << st.generated << " steps=" << st.selection_steps
      << " tautologies=" << st.tautologies << " subsumed=" << st.subsumed << " too_deep=" << st.too_deep
      << " passive_peak=" << st.passive_peak << '\n';
  out << "end\n";
}

std::string write_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t number = 0;
  bool ended = false;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (!saw_header) {
      int version = -1;
      fields >> version;
      if (tag != "saturn-trace") malformed(number, "missing trace header");
      if (version != kTraceFormatVersion) malformed(number, "unsupported trace format version " + std::to_string(version));
      saw_header = true;
      continue;
    }
    if (ended) malformed(number, "content after end marker");
    if (tag == "problem") {
      trace.problem_id = rest_of(fields);
    } else if (tag == "settings") {
      auto kv = parse_fields(fields);
      trace.settings.mode = kv["mode"];
      trace.settings.seed = parse_u64(kv["seed"], number);
      trace.settings.temperature = parse_double(kv["temperature"], number);
      trace.settings.budget = parse_u64(kv["budget"], number);
      trace.settings.shuffle = kv["shuffle"] == "1";
    } else if (tag == "symbol") {
      logic::Symbol s;
      std::string kind, flags;
      fields >> s.id >> s.arity >> kind >> flags;
      if (!fields) malformed(number, "bad symbol record");
      s.name = unquote(rest_of(fields), number);
      s.is_predicate = kind == "pred";
      s.is_equality = flags.find('e') != std::string::npos;
      s.is_introduced = flags.find('i') != std::string::npos;
      s.is_skolem = flags.find('s') != std::string::npos;
      try {
        trace.symbols.add(std::move(s));
      } catch (const std::invalid_argument& e) {
        malformed(number, e.what());
      }
    } else if (tag == "clause") {
      std::string rule, parents, flags;
      TraceClause tc;
      fields >> tc.clause.id >> rule >> parents >> flags;
      if (!fields) malformed(number, "bad clause record");
      std::string lits = rest_of(fields);
      if (lits.size() < 2 || lits.front() != '[' || lits.back() != ']') malformed(number, "bad literal list");
      try {
        tc.clause.rule = logic::parse_rule(rule);
        tc.clause.literals = logic::parse_literals(std::string_view(lits).substr(1, lits.size() - 2), trace.symbols, trace.terms);
      } catch (const std::exception& e) {
        malformed(number, e.what());
      }
      tc.clause.parents = parse_ids(parents, number);
      tc.clause.from_goal = flags.find('g') != std::string::npos;
      tc.deleted = flags.find('d') != std::string::npos;
      if (!trace.clauses.empty() && trace.clauses.back().clause.id >= tc.clause.id) malformed(number, "clause ids not increasing");
      trace.clauses.push_back(std::move(tc));
    } else if (tag == "step") {
      std::size_t index = 0;
      SelectionStep step;
      std::string added, removed;
      fields >> index >> step.selected >> added >> removed;
      if (!fields || added.empty() || added[0] != '+' || removed.empty() || removed[0] != '-') {
        malformed(number, "bad step record");
      }
      if (index != trace.steps.size() + 1) malformed(number, "steps out of order");
      step.added = parse_ids(std::string_view(added).substr(1), number);
      step.removed = parse_ids(std::string_view(removed).substr(1), number);
      trace.steps.push_back(std::move(step));
    } else if (tag == "outcome") {
      std::string name;
      fields >> name;
      try {
        trace.outcome = parse_outcome(name);
      } catch (const std::invalid_argument& e) {
        malformed(number, e.what());
      }
    } else if (tag == "proof") {
      std::string ids;
      fields >> ids;
      trace.proof = parse_ids(ids, number);
    } else if (tag == "stats") {
      auto kv = parse_fields(fields);
      trace.stats.activations = parse_u64(kv["activations"], number);
      trace.stats.generated = parse_u64(kv["generated"], number);
      trace.stats.selection_steps = parse_u64(kv["steps"], number);
      trace.stats.tautologies = parse_u64(kv["tautologies"], number);
      trace.stats.subsumed = parse_u64(kv["subsumed"], number);
      trace.stats.too_deep = parse_u64(kv["too_deep"], number);
      trace.stats.passive_peak = parse_u64(kv["passive_peak"], number);
    } else if (tag == "end") {
      ended = true;
    } else {
      malformed(number, "unknown record '" + tag + "'");
    }
  }
  if (!saw_header) throw std::runtime_error("empty trace");
  if (!ended) throw std::runtime_error("trace truncated: missing end marker");

  // Metadata not stored in the file: SInE levels of inputs, then age, goal
  // ancestry and inherited SInE level of derived clauses.
  logic::Problem inputs = trace.input_problem();
  logic::compute_sine_levels(inputs);
  std::vector<Clause> by_id;
  for (std::size_t i = 0; i < trace.clauses.size(); ++i) {
    Clause& c = trace.clauses[i].clause;
    if (c.rule == logic::Rule::Input) {
      if (i >= inputs.clauses.size() || c.id != i) throw std::runtime_error("input clauses must be numbered 0..n-1");
      c.sine_level = inputs.clauses[i].sine_level;
      c.age = 0;
    } else {
      if (c.id >= by_id.size()) by_id.resize(c.id + 1);
      for (ClauseId p : c.parents) {
        if (p >= by_id.size() || by_id[p].id != p) {
          throw std::runtime_error("clause " + std::to_string(c.id) + " references unknown parent " + std::to_string(p));
        }
      }
      logic::inherit_from_parents(c, by_id);
    }
    if (c.id >= by_id.size()) by_id.resize(c.id + 1);
    by_id[c.id] = c;
  }
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace '" + path + "'");
  try {
    return read_trace(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_trace(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace '" + path + "'");
  write_trace(out, trace);
  if (!out) throw std::runtime_error("failed writing trace '" + path + "'");
}

std::vector<std::vector<ClauseId>> reconstruct_passive_sets(const Trace& trace) {
  std::vector<std::vector<ClauseId>> snapshots;
  snapshots.reserve(trace.steps.size());
  std::set<ClauseId> passive;
  for (const SelectionStep& step : trace.steps) {
    for (ClauseId id : step.removed) passive.erase(id);
    for (ClauseId id : step.added) passive.insert(id);
    snapshots.emplace_back(passive.begin(), passive.end());
  }
  return snapshots;
}

TraceHeights trace_heights(const Trace& trace) {
  TraceHeights h;
  for (const TraceClause& tc : trace.clauses) {
    h.derivation = std::max(h.derivation, tc.clause.age);
    for (const logic::Literal& lit : tc.clause.literals) h.term = std::max(h.term, trace.terms[lit.atom].height);
  }
  return h;
}

}  // namespace saturn::prover
