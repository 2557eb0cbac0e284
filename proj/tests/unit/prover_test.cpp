#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "saturn/logic/problem.hpp"
#include "saturn/prover/inference.hpp"
#include "saturn/prover/passive.hpp"
#include "saturn/prover/saturation.hpp"
#include "saturn/prover/trace.hpp"
#include "saturn/prover/unify.hpp"
#include "support/oracles.hpp"

using namespace saturn;
using namespace saturn::prover;
using logic::Problem;

namespace {

Problem parse(const std::string& text, const std::string& name = "t") {
  Problem p = logic::parse_problem(text, name);
  prepare_problem(p);
  return p;
}

std::string show(const Problem& p, const logic::TermBank& terms, const Clause& c) {
  return logic::format_literals(p.symbols, terms, c.literals);
}

SaturationResult run_baseline(const Problem& p, std::uint64_t budget = 10000, bool trace = true) {
  BaselinePassive passive;
  SaturationOptions options;
  options.max_activations = budget;
  options.record_trace = trace;
  return saturate(p, passive, options);
}

std::string check(const Problem& p, const SaturationResult& r) {
  std::map<ClauseId, const Clause*> index;
  for (const Clause& c : r.store.clauses) index[c.id] = &c;
  return oracle::check_refutation(p, r.store.terms, index, *r.empty_clause);
}

/// Scores clauses from a fixed table keyed by id, counting calls.
class TableEvaluator : public ClauseEvaluator {
 public:
  std::map<ClauseId, double> logits;
  double fallback = 0.0;
  std::size_t calls = 0;
  std::size_t scored = 0;
  std::vector<double> evaluate(std::span<const ClauseId> batch, const logic::ClauseStore&) override {
    ++calls;
    scored += batch.size();
    std::vector<double> out;
    for (ClauseId id : batch) out.push_back(logits.count(id) ? logits[id] : fallback);
    return out;
  }
};

logic::ClauseStore store_with(std::vector<std::pair<std::uint32_t, std::uint32_t>> age_weight) {
  logic::ClauseStore store;
  for (auto [age, weight] : age_weight) {
    std::vector<logic::TermId> args;
    logic::TermId a = store.terms.apply(1, {});
    for (std::uint32_t i = 1; i < weight; ++i) args.push_back(a);
    Clause c;
    c.age = age;
    c.literals = {logic::Literal{true, store.terms.apply(0, args)}};
    store.add(c);
  }
  return store;
}

}  // namespace

TEST(Unify, BindsVariableToConstant) {
  Problem p = parse("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(a)).");
  auto s = mgu(p.terms, p.clauses[0].literals[0].atom, p.clauses[1].literals[0].atom);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->domain(), std::vector<logic::VarIndex>{0});
  EXPECT_EQ(logic::format_term(p.symbols, p.terms, *s->lookup(0)), "a");
}

TEST(Unify, OccursCheck) {
  Problem p = parse("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(f(X))).");
  EXPECT_FALSE(mgu(p.terms, p.clauses[0].literals[0].atom, p.clauses[1].literals[0].atom));
}

TEST(Unify, NestedUnifierIsIdempotent) {
  // q(X, f(Y)) against q(g(Z), f(Z)) with Z as variable 2.
  Problem p = parse("cnf(a, axiom, q(X, f(Y)) | q(g(Z), f(Z))).");
  auto lhs = p.clauses[0].literals[0].atom;
  auto rhs = p.clauses[0].literals[1].atom;
  auto s = mgu(p.terms, lhs, rhs);
  ASSERT_TRUE(s);
  EXPECT_EQ(logic::format_term(p.symbols, p.terms, *s->lookup(0)), "g(X2)");
  EXPECT_EQ(logic::format_term(p.symbols, p.terms, *s->lookup(1)), "X2");
  EXPECT_FALSE(s->lookup(2));
  EXPECT_EQ(s->apply(p.terms, lhs), s->apply(p.terms, rhs));
  for (auto v : s->domain()) {
    auto bound = *s->lookup(v);
    EXPECT_EQ(s->apply(p.terms, bound), bound);
  }
}

TEST(Unify, ClashAndIdentity) {
  Problem p = parse("cnf(a, axiom, p(a) | p(b) | p(X)).");
  auto& l = p.clauses[0].literals;
  EXPECT_FALSE(mgu(p.terms, l[0].atom, l[1].atom));
  auto s = mgu(p.terms, l[2].atom, l[2].atom);
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->empty());
}

TEST(Resolve, Propositional) {
  Problem p = parse("cnf(a, axiom, p | q).\ncnf(b, axiom, ~p | r).");
  auto r = resolve(p.terms, p.clauses[0], 0, p.clauses[1], 0);
  ASSERT_TRUE(r);
  EXPECT_EQ(show(p, p.terms, *r), "q | r");
  EXPECT_EQ(r->rule, logic::Rule::Resolution);
  EXPECT_EQ(r->parents, (std::vector<ClauseId>{0, 1}));
}

TEST(Resolve, WithUnifier) {
  Problem p = parse("cnf(a, axiom, p(X) | q(X)).\ncnf(b, axiom, ~p(a)).");
  auto r = resolve(p.terms, p.clauses[0], 0, p.clauses[1], 0);
  ASSERT_TRUE(r);
  EXPECT_EQ(show(p, p.terms, *r), "q(a)");
}

TEST(Resolve, EmptyClauseAndFailures) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, axiom, ~p).\ncnf(c, axiom, ~q).");
  auto r = resolve(p.terms, p.clauses[0], 0, p.clauses[1], 0);
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->empty());
  EXPECT_FALSE(resolve(p.terms, p.clauses[0], 0, p.clauses[2], 0));
  EXPECT_FALSE(resolve(p.terms, p.clauses[1], 0, p.clauses[2], 0));
}

TEST(Resolve, RenamesApart) {
  Problem p = parse("cnf(a, axiom, p(X, a) | q(X)).\ncnf(b, axiom, ~p(b, X) | r(X)).");
  auto r = resolve(p.terms, p.clauses[0], 0, p.clauses[1], 0);
  ASSERT_TRUE(r);
  EXPECT_EQ(show(p, p.terms, *r), "q(b) | r(a)");
  EXPECT_TRUE(oracle::is_resolvent(p.terms, p.clauses[0], p.clauses[1], *r));
}

TEST(Resolve, TautologyFlagged) {
  Problem p = parse("cnf(a, axiom, p(X) | q(X)).\ncnf(b, axiom, ~p(a) | ~q(a)).");
  auto r = resolve(p.terms, p.clauses[0], 0, p.clauses[1], 0);
  ASSERT_TRUE(r);
  EXPECT_TRUE(is_tautology(*r));
}

TEST(Factor, Examples) {
  Problem p = parse("cnf(a, axiom, p(X) | p(a)).\ncnf(b, axiom, p(X) | p(f(Y))).\ncnf(c, axiom, p(a) | q(b)).");
  auto f1 = factor(p.terms, p.clauses[0]);
  ASSERT_EQ(f1.size(), 1u);
  EXPECT_EQ(show(p, p.terms, f1[0]), "p(a)");
  EXPECT_EQ(f1[0].rule, logic::Rule::Factoring);
  EXPECT_EQ(f1[0].parents, std::vector<ClauseId>{0});
  auto f2 = factor(p.terms, p.clauses[1]);
  ASSERT_EQ(f2.size(), 1u);
  EXPECT_EQ(show(p, p.terms, f2[0]), "p(f(X0))");
  EXPECT_TRUE(factor(p.terms, p.clauses[2]).empty());
}

TEST(Factor, NegativeLiteralsAndOracle) {
  Problem p = parse("cnf(a, axiom, ~p(X, Y) | q | ~p(Y, a)).");
  auto fs = factor(p.terms, p.clauses[0]);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(show(p, p.terms, fs[0]), "~p(a,a) | q");
  EXPECT_TRUE(oracle::is_factor(p.terms, p.clauses[0], fs[0]));
}

TEST(Subsumption, Multiset) {
  Problem p = parse(
      "cnf(a, axiom, p(X) | p(Y)).\ncnf(b, axiom, p(a)).\ncnf(c, axiom, p(X) | q(X)).\ncnf(d, axiom, p(b) | q(b) | r)."
      "\ncnf(e, axiom, p(b) | q(c)).");
  EXPECT_FALSE(subsumes(p.terms, p.clauses[0], p.clauses[1]));
  EXPECT_TRUE(subsumes(p.terms, p.clauses[1], p.clauses[1]));
  EXPECT_TRUE(subsumes(p.terms, p.clauses[2], p.clauses[3]));
  EXPECT_FALSE(subsumes(p.terms, p.clauses[2], p.clauses[4]));
  EXPECT_FALSE(subsumes(p.terms, p.clauses[3], p.clauses[2]));
}

TEST(Subsumption, BacktracksAndRespectsEffort) {
  Problem p = parse("cnf(a, axiom, p(X,Y) | p(Y,Z)).\ncnf(b, axiom, p(a,b) | p(c,d) | p(d,e)).");
  EXPECT_TRUE(subsumes(p.terms, p.clauses[0], p.clauses[1]));
  std::size_t none = 0;
  EXPECT_FALSE(subsumes(p.terms, p.clauses[0], p.clauses[1], none));
  std::size_t plenty = 100;
  EXPECT_TRUE(subsumes(p.terms, p.clauses[0], p.clauses[1], plenty));
  EXPECT_LT(plenty, 100u);
}

TEST(Tautology, Detection) {
  Problem p = parse("cnf(a, axiom, p(a) | ~p(a)).\ncnf(b, axiom, p(X) | ~p(Y)).");
  EXPECT_TRUE(is_tautology(p.clauses[0]));
  EXPECT_FALSE(is_tautology(p.clauses[1]));
}

TEST(Saturate, ComplementaryUnits) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).");
  auto r = run_baseline(p);
  EXPECT_EQ(r.outcome, Outcome::Refutation);
  EXPECT_LE(r.stats.activations, 2u);
  EXPECT_EQ(check(p, r), "");
}

TEST(Saturate, SingleAtomSaturates) {
  Problem p = parse("cnf(a, axiom, p(a)).");
  auto r = run_baseline(p);
  EXPECT_EQ(r.outcome, Outcome::Saturated);
  EXPECT_FALSE(r.empty_clause);
  EXPECT_TRUE(r.proof.empty());
}

TEST(Saturate, EmptyProblemSaturates) {
  Problem p = parse("");
  EXPECT_EQ(run_baseline(p).outcome, Outcome::Saturated);
}

TEST(Saturate, EmptyInputClauseRefutesImmediately) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, axiom, $false).");
  auto r = run_baseline(p);
  EXPECT_EQ(r.outcome, Outcome::Refutation);
  EXPECT_EQ(r.stats.activations, 0u);
  EXPECT_EQ(r.proof, std::vector<ClauseId>{1});
}

TEST(Saturate, BudgetMustBePositive) {
  Problem p = parse("cnf(a, axiom, p).");
  EXPECT_THROW(run_baseline(p, 0), std::invalid_argument);
}

TEST(Saturate, ResourceOut) {
  Problem p = parse("cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(f(X))).\ncnf(c, negated_conjecture, ~q).");
  auto r = run_baseline(p, 25);
  EXPECT_EQ(r.outcome, Outcome::ResourceOut);
  EXPECT_EQ(r.stats.activations, 25u);
}

TEST(Saturate, GeneratedClauseCap) {
  Problem p = parse("cnf(a, axiom, ~less(X,Y) | ~less(Y,Z) | less(X,Z)).\ncnf(b, axiom, less(e0,e1)).\n"
                    "cnf(c, axiom, less(e1,e2)).\ncnf(d, negated_conjecture, ~less(e2,e0)).");
  BaselinePassive passive;
  SaturationOptions options;
  options.max_generated = 10;
  auto r = saturate(p, passive, options);
  EXPECT_EQ(r.outcome, Outcome::ResourceOut);
  EXPECT_GE(r.stats.generated, 10u);
}

TEST(Saturate, TermHeightLimit) {
  Problem p = parse("cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(f(X))).\ncnf(c, negated_conjecture, ~p(f(f(f(a))))).");
  BaselinePassive passive;
  SaturationOptions options;
  options.max_term_height = 4;
  auto r = saturate(p, passive, options);
  EXPECT_EQ(r.outcome, Outcome::Refutation);

  Problem open = parse("cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(f(X))).\ncnf(c, negated_conjecture, ~q(a)).");
  BaselinePassive passive2;
  options.max_term_height = 6;
  r = saturate(open, passive2, options);
  EXPECT_EQ(r.outcome, Outcome::ResourceOut);
  EXPECT_GT(r.stats.too_deep, 0u);
  for (const auto& c : r.store.clauses) {
    for (const auto& lit : c.literals) EXPECT_LE(r.store.terms[lit.atom].height, 6u);
  }
}

TEST(Saturate, TimeLimit) {
  Problem p = parse("cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(f(X))).");
  BaselinePassive passive;
  SaturationOptions options;
  options.max_activations = 1'000'000'000;
  options.time_limit = std::chrono::milliseconds(0);
  EXPECT_EQ(saturate(p, passive, options).outcome, Outcome::ResourceOut);
}

TEST(Saturate, ChainProofIsAncestorClosure) {
  std::string text = "cnf(c1, axiom, p1).\n";
  for (int i = 1; i < 10; ++i)
    text += "cnf(c" + std::to_string(i + 1) + ", axiom, ~p" + std::to_string(i) + " | p" + std::to_string(i + 1) + ").\n";
  text += "cnf(c11, negated_conjecture, ~p10).\n";
  Problem p = parse(text);
  auto r = run_baseline(p);
  ASSERT_EQ(r.outcome, Outcome::Refutation);
  EXPECT_EQ(check(p, r), "");

  std::map<ClauseId, std::vector<ClauseId>> parents;
  for (const Clause& c : r.store.clauses) parents[c.id] = c.parents;
  auto closure = oracle::ancestors(parents, *r.empty_clause);
  EXPECT_EQ(std::vector<ClauseId>(closure.begin(), closure.end()), r.proof);
  for (ClauseId id = 0; id < 11; ++id) EXPECT_TRUE(closure.count(id)) << id;
  for (ClauseId id : r.proof) {
    if (id >= 11) EXPECT_EQ(r.store[id].rule, logic::Rule::Resolution);
  }
  ASSERT_TRUE(r.trace);
  EXPECT_EQ(r.trace->proof, r.proof);
}

TEST(Saturate, InputsForwardSubsumed) {
  Problem p = parse("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(a) | q).\ncnf(c, axiom, p(a) | ~p(a)).");
  auto r = run_baseline(p);
  EXPECT_EQ(r.outcome, Outcome::Saturated);
  EXPECT_EQ(r.stats.subsumed, 1u);
  EXPECT_EQ(r.stats.tautologies, 1u);
  ASSERT_TRUE(r.trace);
  EXPECT_FALSE(r.trace->clauses[0].deleted);
  EXPECT_TRUE(r.trace->clauses[1].deleted);
  EXPECT_TRUE(r.trace->clauses[2].deleted);
}

TEST(Saturate, CorpusSoundAndComplete) {
  for (const char* dir : {"unsat", "sat"}) {
    bool unsat = std::string(dir) == "unsat";
    for (const auto& entry : std::filesystem::directory_iterator(oracle::data_dir() + "/" + dir)) {
      Problem p = logic::load_problem(entry.path().string());
      prepare_problem(p);
      auto r = run_baseline(p, 10000, false);
      if (unsat) {
        ASSERT_EQ(r.outcome, Outcome::Refutation) << entry.path();
        EXPECT_EQ(check(p, r), "") << entry.path();
      } else {
        EXPECT_EQ(r.outcome, Outcome::Saturated) << entry.path();
      }
    }
  }
}

TEST(Saturate, ShuffledRunsStaySound) {
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/order_cycle_5.p");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Problem q = shuffle_problem(p, seed);
    prepare_problem(q);
    ASSERT_EQ(q.clauses.size(), p.clauses.size());
    auto r = run_baseline(q);
    ASSERT_EQ(r.outcome, Outcome::Refutation);
    EXPECT_EQ(check(q, r), "");
  }
  Problem a = shuffle_problem(p, 7), b = shuffle_problem(p, 7);
  EXPECT_EQ(logic::print_problem(a), logic::print_problem(b));
}

TEST(Trace, WellFormed) {
  for (const char* name : {"chain_10", "php_2", "group_left_cancel", "order_cycle_4", "factoring_needed"}) {
    Problem p = logic::load_problem(oracle::data_dir() + "/unsat/" + name + ".p");
    prepare_problem(p);
    auto r = run_baseline(p);
    ASSERT_TRUE(r.trace);
    const Trace& t = *r.trace;
    auto snapshots = reconstruct_passive_sets(t);
    ASSERT_EQ(snapshots.size(), t.steps.size());
    std::set<ClauseId> known;
    for (const auto& tc : t.clauses) known.insert(tc.clause.id);
    std::set<ClauseId> current;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      for (ClauseId id : t.steps[i].removed) current.erase(id);
      for (ClauseId id : t.steps[i].added) current.insert(id);
      EXPECT_EQ(std::vector<ClauseId>(current.begin(), current.end()), snapshots[i]) << name << " step " << i;
      EXPECT_TRUE(current.count(t.steps[i].selected)) << name;
      for (ClauseId id : current) EXPECT_TRUE(known.count(id));
    }
    std::map<ClauseId, std::vector<ClauseId>> parents;
    for (const auto& tc : t.clauses) parents[tc.clause.id] = tc.clause.parents;
    auto closure = oracle::ancestors(parents, *r.empty_clause);
    EXPECT_EQ(std::vector<ClauseId>(closure.begin(), closure.end()), t.proof);
    EXPECT_TRUE(t.clauses[t.index_of(*r.empty_clause)].clause.empty());
  }
}

TEST(Trace, RoundTripAndDeterminism) {
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/group_closure_instance.p");
  prepare_problem(p);
  auto r1 = run_baseline(p);
  auto r2 = run_baseline(p);
  std::string text = write_trace(*r1.trace);
  EXPECT_EQ(text, write_trace(*r2.trace));
  std::istringstream in(text);
  Trace back = read_trace(in);
  EXPECT_EQ(write_trace(back), text);
  ASSERT_EQ(back.clauses.size(), r1.trace->clauses.size());
  for (std::size_t i = 0; i < back.clauses.size(); ++i) {
    const Clause& a = back.clauses[i].clause;
    const Clause& b = r1.trace->clauses[i].clause;
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.age, b.age);
    EXPECT_EQ(a.from_goal, b.from_goal);
    EXPECT_EQ(a.sine_level, b.sine_level);
    EXPECT_EQ(a.parents, b.parents);
    EXPECT_EQ(oracle::canonical(back.terms, a), oracle::canonical(r1.trace->terms, b));
  }
  EXPECT_EQ(back.stats, r1.trace->stats);
  EXPECT_EQ(back.outcome, Outcome::Refutation);
  Problem input = back.input_problem();
  ASSERT_EQ(input.clauses.size(), p.clauses.size());
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    EXPECT_EQ(oracle::canonical(input.terms, input.clauses[i]), oracle::canonical(p.terms, p.clauses[i]));
    EXPECT_EQ(input.clauses[i].from_goal, p.clauses[i].from_goal);
  }
}

TEST(Trace, RejectsMalformed) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).");
  std::string text = write_trace(*run_baseline(p).trace);
  auto fails = [](const std::string& s) {
    std::istringstream in(s);
    EXPECT_THROW(read_trace(in), std::runtime_error) << s;
  };
  fails(text.substr(0, text.rfind("end")));
  fails("saturn-trace 99\n" + text.substr(text.find('\n') + 1));
  fails("");
  std::string bad = text;
  bad.replace(bad.find("step 1"), 6, "step 5");
  fails(bad);
}

TEST(Trace, Heights) {
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/fo_chain_4.p");
  prepare_problem(p);
  auto r = run_baseline(p);
  auto h = trace_heights(*r.trace);
  EXPECT_GE(h.derivation, 3u);
  EXPECT_GE(h.term, 2u);
}

TEST(Baseline, AlternatesAgeAndWeight) {
  auto store = store_with({{0, 9}, {3, 2}});
  BaselinePassive passive;
  passive.enqueue(0);
  passive.enqueue(1);
  passive.flush_pending(store);
  EXPECT_EQ(passive.select(store), 0u);
  EXPECT_EQ(passive.select(store), 1u);
  EXPECT_TRUE(passive.empty());
}

TEST(Baseline, TiesFollowInsertionOrder) {
  auto store = store_with({{1, 3}, {1, 3}, {1, 3}, {1, 3}, {1, 3}});
  BaselinePassive passive;
  for (ClauseId id : {3u, 1u, 4u, 0u, 2u}) passive.enqueue(id);
  passive.flush_pending(store);
  std::vector<ClauseId> order;
  while (!passive.empty()) order.push_back(passive.select(store));
  // Age picks follow insertion order; weight picks take the lowest id.
  EXPECT_EQ(order, (std::vector<ClauseId>{3, 0, 1, 2, 4}));
}

TEST(Baseline, SingleClauseAndGuards) {
  auto store = store_with({{5, 5}});
  BaselinePassive passive;
  EXPECT_THROW(passive.select(store), std::logic_error);
  passive.enqueue(0);
  EXPECT_THROW(passive.select(store), std::logic_error);
  passive.flush_pending(store);
  EXPECT_EQ(passive.select(store), 0u);
  EXPECT_THROW(BaselinePassive(0, 0), std::invalid_argument);
}

TEST(Baseline, QueuesHoldSameSet) {
  auto store = store_with({{2, 1}, {0, 7}, {1, 4}, {0, 2}, {3, 3}, {1, 1}});
  BaselinePassive passive(2, 3);
  for (ClauseId id = 0; id < 6; ++id) passive.enqueue(id);
  passive.flush_pending(store);
  std::set<ClauseId> seen;
  while (!passive.empty()) EXPECT_TRUE(seen.insert(passive.select(store)).second);
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Neural, ArgmaxAtZeroTemperature) {
  auto store = store_with({{0, 1}, {0, 1}, {0, 1}});
  TableEvaluator eval;
  eval.logits = {{0, 1.5}, {1, 0.3}, {2, 1.5}};
  NeuralPassive passive(eval, 0.0, 1);
  for (ClauseId id = 0; id < 3; ++id) passive.enqueue(id);
  passive.flush_pending(store);
  EXPECT_EQ(passive.select(store), 0u);
  EXPECT_EQ(passive.select(store), 2u);
  EXPECT_EQ(passive.select(store), 1u);
}

TEST(Neural, FlushIsOneBulkCall) {
  auto store = store_with({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  TableEvaluator eval;
  NeuralPassive passive(eval, 1.0, 3);
  passive.flush_pending(store);
  EXPECT_EQ(eval.calls, 0u);
  for (ClauseId id = 0; id < 5; ++id) passive.enqueue(id);
  passive.flush_pending(store);
  EXPECT_EQ(eval.calls, 1u);
  EXPECT_EQ(eval.scored, 5u);
  EXPECT_EQ(passive.size(), 5u);
  EXPECT_EQ(passive.evaluation_calls(), 1u);
}

TEST(Neural, DroppedWhileBufferedNeverEvaluated) {
  auto store = store_with({{0, 1}, {0, 2}, {0, 3}});
  TableEvaluator eval;
  NeuralPassive passive(eval, 0.0, 3);
  for (ClauseId id = 0; id < 3; ++id) passive.enqueue(id);
  passive.retain_pending([](ClauseId id) { return id != 1; });
  passive.flush_pending(store);
  EXPECT_EQ(eval.scored, 2u);
  EXPECT_FALSE(passive.score(1));
  EXPECT_EQ(passive.size(), 2u);
}

TEST(Neural, ScoresFrozenAndStable) {
  auto store = store_with({{0, 1}, {0, 2}});
  TableEvaluator eval;
  eval.logits = {{0, 0.25}, {1, -1.0}};
  NeuralPassive passive(eval, 0.5, 11);
  passive.enqueue(0);
  passive.enqueue(1);
  passive.flush_pending(store);
  auto s = passive.score(0);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->logit, 0.25);
  EXPECT_EQ(passive.score(0)->noise, s->noise);
  EXPECT_TRUE(std::isfinite(s->noise));
}

TEST(Neural, ShiftInvariantSelection) {
  auto store = store_with(std::vector<std::pair<std::uint32_t, std::uint32_t>>(40, {0, 1}));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-3, 3);
  std::map<ClauseId, double> logits;
  for (ClauseId id = 0; id < 40; ++id) logits[id] = dist(rng);
  auto order = [&](double shift, double tau) {
    TableEvaluator eval;
    for (auto [id, l] : logits) eval.logits[id] = l + shift;
    NeuralPassive passive(eval, tau, 99);
    for (ClauseId id = 0; id < 40; ++id) passive.enqueue(id);
    passive.flush_pending(store);
    std::vector<ClauseId> out;
    while (!passive.empty()) out.push_back(passive.select(store));
    return out;
  };
  EXPECT_EQ(order(0.0, 0.0), order(7.5, 0.0));
  EXPECT_EQ(order(0.0, 1.0), order(0.5, 1.0));
}

TEST(Neural, GumbelMatchesSoftmaxForTwoLogits) {
  std::mt19937_64 rng(2024);
  const int draws = 100000;
  int second = 0;
  const double l1 = std::log(2.0);
  for (int i = 0; i < draws; ++i) {
    double g0 = gumbel_sample(rng), g1 = gumbel_sample(rng);
    if (l1 + g1 > g0) ++second;
  }
  double freq = static_cast<double>(second) / draws;
  EXPECT_LE(std::abs(freq - 2.0 / 3.0), 0.02);
}

TEST(Neural, FairnessFallbackPicksOldest) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shape(70, {5, 1});
  shape[69] = {0, 1};
  auto store = store_with(shape);
  TableEvaluator eval;
  eval.fallback = 1.0;
  eval.logits[69] = -100.0;
  NeuralPassive passive(eval, 0.0, 1, true);
  for (ClauseId id = 0; id < 70; ++id) passive.enqueue(id);
  passive.flush_pending(store);
  for (int i = 1; i < 64; ++i) EXPECT_NE(passive.select(store), 69u);
  EXPECT_EQ(passive.select(store), 69u);
  EXPECT_THROW(NeuralPassive(eval, -1.0, 1), std::invalid_argument);
}

TEST(Neural, SaturationEvaluatesEachClauseOnce) {
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/php_2.p");
  prepare_problem(p);
  TableEvaluator eval;
  NeuralPassive passive(eval, 0.0, 1);
  SaturationOptions options;
  auto r = saturate(p, passive, options);
  EXPECT_EQ(r.outcome, Outcome::Refutation);
  EXPECT_EQ(check(p, r), "");
  EXPECT_EQ(eval.scored, passive.evaluated_clauses());
}
