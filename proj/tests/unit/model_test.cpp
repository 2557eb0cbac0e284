#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "saturn/graph/cnf_graph.hpp"
#include "saturn/logic/problem.hpp"
#include "saturn/model/evaluator.hpp"
#include "saturn/model/gnn.hpp"
#include "saturn/model/model.hpp"
#include "saturn/prover/saturation.hpp"
#include "support/model_oracle.hpp"
#include "support/oracles.hpp"
#include "support/random_dags.hpp"

using namespace saturn;
using namespace saturn::model;
using logic::ClauseId;
using logic::Problem;

namespace {

Problem parse(const std::string& text, const std::string& name = "t") {
  Problem p = logic::parse_problem(text, name);
  prover::prepare_problem(p);
  return p;
}

HyperParams small(std::uint32_t n = 6, std::uint32_t m = 10, std::uint32_t k = 2) {
  HyperParams hp;
  hp.n = n;
  hp.m = m;
  hp.k = k;
  return hp;
}

Tensor run_symbols(const Model& model, const graph::CnfGraph& graph) {
  Tape tape(false);
  ModelVars vars(tape, model);
  return tape.value(run_gnn(tape, vars, graph).symbols);
}

void zero_all(Model& model) {
  for (Parameter* p : model.parameters()) p->value.fill(0.0);
}

prover::SaturationResult prove(const Model& model, const Problem& p, std::uint64_t budget = 2000,
                               std::uint64_t max_generated = 20000) {
  NeuralEvaluator evaluator(model, p);
  prover::NeuralPassive passive(evaluator, 0.0, 1);
  prover::SaturationOptions options;
  options.max_activations = budget;
  options.max_generated = max_generated;
  options.record_trace = true;
  return prover::saturate(p, passive, options);
}

}  // namespace

TEST(ModelInit, DeterministicPerSeed) {
  Model a = init_model(small(), 7), b = init_model(small(), 7), c = init_model(small(), 8);
  auto pa = a.parameters(), pb = b.parameters(), pc = c.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
    any_diff |= !(pa[i]->value == pc[i]->value);
  }
  EXPECT_TRUE(any_diff);
}

TEST(ModelInit, ShapesRangesAndDefaultSize) {
  Model model = init_model(HyperParams{}, 1);
  EXPECT_EQ(model.kernels.size(), 8u * 16u * 2u);
  EXPECT_EQ(model.gage.w1.value.rows(), 256u);
  EXPECT_EQ(model.gage.w1.value.cols(), 96u);
  EXPECT_EQ(model.gweight.w1.value.cols(), 97u);
  EXPECT_EQ(model.head_hidden.weight.value.cols(), 2u * 32u + 12u);
  EXPECT_EQ(model.rules.value.cols(), 8u);
  for (const Parameter* p : model.parameters()) {
    const bool is_bias = p->name.ends_with("bias") || p->name.ends_with(".b") || p->name.ends_with("b1") || p->name.ends_with("b3");
    for (double x : p->value.data()) {
      if (p->name.ends_with("ln_gain")) {
        EXPECT_EQ(x, 1.0);
      } else if (is_bias) {
        EXPECT_EQ(x, 0.0) << p->name;
      } else {
        double fan_in = p->name == "head.w3" ? 256.0 : static_cast<double>(p->value.cols());
        EXPECT_LE(std::abs(x), std::sqrt(1.0 / fan_in)) << p->name;
      }
    }
  }
  std::ostringstream out;
  save_model(out, model);
  // Same order as a 1.6 MB single-precision model; values here are 64-bit.
  EXPECT_GT(out.str().size(), 800'000u);
  EXPECT_LT(out.str().size(), 3'200'000u);
  EXPECT_EQ(model.scalar_count(), 352'256u);
}

TEST(ModelInit, RejectsInvalidSizes) {
  EXPECT_THROW(init_model(small(0), 1), std::invalid_argument);
  HyperParams hp = small();
  hp.f = 11;
  EXPECT_THROW(init_model(hp, 1), std::invalid_argument);
  hp = small();
  hp.r = 2;
  EXPECT_THROW(init_model(hp, 1), std::invalid_argument);
}

TEST(Gnn, MatchesNaiveOracle) {
  Problem p = parse("cnf(a, axiom, p(f(X), a) | ~q(X)).\ncnf(b, negated_conjecture, q(g(a, b))).\n");
  graph::CnfGraph g = graph::build_graph(p);
  for (std::uint32_t k : {0u, 1u, 3u}) {
    Model model = init_model(small(5, 7, k), 11 + k);
    oracle::NaiveModel naive(model, g);
    Tape tape(false);
    ModelVars vars(tape, model);
    GnnOutput out = run_gnn(tape, vars, g);
    for (std::size_t s = 0; s < naive.symbols.size(); ++s) {
      EXPECT_LE(oracle::max_abs_diff(naive.symbols[s], Tensor::column(oracle::column(tape.value(out.symbols), s))), 1e-12);
    }
    for (std::size_t c = 0; c < naive.seeds.size(); ++c) {
      EXPECT_LE(oracle::max_abs_diff(naive.seeds[c], Tensor::column(oracle::column(tape.value(out.clauses), c))), 1e-12);
    }
  }
}

TEST(Gnn, ZeroRoundsGivesPromotedInitialEmbeddings) {
  Problem p = parse("cnf(a, axiom, p(a)).\n");
  graph::CnfGraph g = graph::build_graph(p);
  Model model = init_model(small(4, 4, 0), 3);
  Tensor symbols = run_symbols(model, g);
  for (std::size_t s = 0; s < g.count(graph::NodeKind::Symbol); ++s) {
    oracle::Vec f(g.features[1].cols());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = g.features[1](s, j);
    oracle::Vec x = oracle::relu(oracle::plus(oracle::matvec(model.embed[1].weight.value, f), model.embed[1].bias.value));
    oracle::Vec expect = oracle::plus(oracle::matvec(model.promote_symbol.weight.value, x), model.promote_symbol.bias.value);
    EXPECT_LE(oracle::max_abs_diff(expect, Tensor::column(oracle::column(symbols, s))), 1e-15);
  }
}

TEST(Gnn, SymmetricSymbolsGetIdenticalEmbeddings) {
  graph::CnfGraph g;
  g.features[0] = Tensor::from_rows({{1, 0, 0}});
  g.features[1] = Tensor(2, 10);
  for (std::size_t r = 0; r < 2; ++r) g.features[1](r, 1) = 1.0;
  g.features[2] = Tensor(0, 1);
  g.features[3] = Tensor(0, 10);
  g.features[4] = Tensor(0, 10);
  g.edges[0] = {{0, 0}, {1, 0}};
  Tensor symbols = run_symbols(init_model(small(), 5), g);
  EXPECT_EQ(oracle::column(symbols, 0), oracle::column(symbols, 1));
}

TEST(Gnn, HandComputedSingleRound) {
  // One sort node and two symbols, a constant and a unary function, each
  // with an edge to the sort.
  graph::CnfGraph g;
  g.features[0] = Tensor::from_rows({{1, 0, 0}});
  g.features[1] = Tensor(2, 10);
  g.features[1](0, 1) = 1.0;
  g.features[1](1, 1) = 1.0;
  g.features[1](1, 5) = 1.0;
  g.features[2] = Tensor(0, 1);
  g.features[3] = Tensor(0, 10);
  g.features[4] = Tensor(0, 10);
  g.edges[0] = {{0, 0}, {1, 0}};

  Model model = init_model(small(2, 2, 1), 1);
  zero_all(model);
  model.embed[0].weight.value = Tensor::from_rows({{1, 0, 0}, {0, 1, 0}});
  model.embed[1].weight.value = Tensor(2, 10);
  model.embed[1].weight.value(0, 1) = 1;
  model.embed[1].weight.value(1, 5) = 1;
  // Symbols listen to the sort through reversed kind-1 edges.
  model.kernel(0, 1, false).value = Tensor::from_rows({{2, 0}, {0, 2}});
  model.kernel(0, 1, true).value = Tensor::from_rows({{0, 1}, {1, 0}});
  model.promote_symbol.weight.value = Tensor::from_rows({{1, 0}, {0, 1}});
  model.promote_symbol.bias.value = Tensor::from_rows({{1}, {-1}});

  // Initial: sort [1,0], constant [1,0], function [1,1].
  // Round: 2*x_i + swap([1,0]) gives [2,1] and [2,3]; promotion adds [1,-1].
  EXPECT_EQ(run_symbols(model, g), Tensor::from_rows({{3, 3}, {0, 2}}));
}

TEST(Gage, InsertLevels) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, axiom, ~p | q).\ncnf(c, axiom, ~q).\n");
  Model model = init_model(small(), 1);
  EvalState state(model, p);
  std::vector<ClauseId> both{0, 1};
  state.gage_insert(3, logic::Rule::Resolution, both);
  EXPECT_EQ(state.height(3), 1u);
  EXPECT_EQ(state.pending_layer_sizes(), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(state.gage_insert(4, logic::Rule::Factoring, std::vector<ClauseId>{99}), std::invalid_argument);
  EXPECT_THROW(state.gage_insert(3, logic::Rule::Factoring, std::vector<ClauseId>{0}), std::invalid_argument);
}

TEST(Gage, BaseLevelClamps) {
  Problem p = parse("cnf(a, axiom, p).\n");
  Model model = init_model(small(), 1);
  EvalState state(model, p);
  ClauseId last = 0;
  for (ClauseId id = 1; id <= 6; ++id) {
    state.gage_insert(id, logic::Rule::Factoring, std::vector<ClauseId>{last});
    last = id;
  }
  state.gage_eval_pending();
  EXPECT_EQ(state.base_level(), 7u);
  EXPECT_EQ(state.height(5), 5u);
  state.gage_insert(7, logic::Rule::Factoring, std::vector<ClauseId>{5});
  EXPECT_EQ(state.height(7), 7u);
  EXPECT_EQ(state.pending_layer_sizes(), (std::vector<std::size_t>{1}));
}

TEST(Gage, IndependentClausesShareOneLayer) {
  Problem p = parse("cnf(a, axiom, p).\ncnf(b, axiom, q).\ncnf(c, axiom, r).\ncnf(d, axiom, s).\n");
  Model model = init_model(small(), 1);
  EvalState state(model, p);
  state.gage_insert(4, logic::Rule::Resolution, std::vector<ClauseId>{0, 1});
  state.gage_insert(5, logic::Rule::Resolution, std::vector<ClauseId>{2, 3});
  state.gage_eval_pending();
  EXPECT_EQ(state.stats().gage_layers, 1u);
  EXPECT_EQ(state.stats().gage_nodes, 2u);
}

TEST(Gage, RuleChangesEmbedding) {
  Problem p = parse("cnf(a, axiom, p | p).\n");
  Model model = init_model(small(), 2);
  EvalState state(model, p);
  state.gage_insert(1, logic::Rule::Factoring, std::vector<ClauseId>{0});
  state.gage_insert(2, logic::Rule::Resolution, std::vector<ClauseId>{0});
  state.gage_eval_pending();
  EXPECT_NE(state.gage_embedding(1), state.gage_embedding(2));
}

TEST(Gage, ChainOfHundred) {
  Problem p = parse("cnf(a, axiom, p).\n");
  Model model = init_model(small(), 3);
  EvalState state(model, p);
  for (ClauseId id = 1; id <= 100; ++id) state.gage_insert(id, logic::Rule::Factoring, std::vector<ClauseId>{id - 1});
  for (ClauseId id = 1; id <= 100; ++id) EXPECT_EQ(state.height(id), id);
  state.gage_eval_pending();
  EXPECT_EQ(state.stats().gage_layers, 100u);
  EXPECT_EQ(state.stats().gage_nodes, 100u);
}

TEST(Gage, LayeredMatchesNaiveRecursion) {
  Problem p = oracle::dag_signature_problem();
  prover::prepare_problem(p);
  Model model = init_model(small(), 4);
  oracle::NaiveModel naive(model, graph::build_graph(p));
  std::mt19937_64 rng(42);
  for (int round = 0; round < 10; ++round) {
    auto clauses = oracle::random_derivation_dag(p, 1 + rng() % 150, rng);
    naive.forget_derivations();
    EvalState state(model, p);
    for (const auto& c : clauses) {
      if (c.id >= p.clauses.size()) state.gage_insert(c.id, c.rule, c.parents);
    }
    state.gage_eval_pending();
    EXPECT_LE(state.stats().gage_nodes, clauses.size());
    for (const auto& c : clauses) {
      EXPECT_LE(oracle::max_abs_diff(naive.gage(clauses, c.id), state.gage_embedding(c.id)), 1e-10);
    }
  }
}

TEST(Gage, IncrementalEqualsMonolithic) {
  Problem p = oracle::dag_signature_problem();
  prover::prepare_problem(p);
  Model model = init_model(small(), 5);
  std::mt19937_64 rng(9);
  auto clauses = oracle::random_derivation_dag(p, 120, rng);
  EvalState whole(model, p), pieces(model, p);
  for (const auto& c : clauses) {
    if (c.id < p.clauses.size()) continue;
    whole.gage_insert(c.id, c.rule, c.parents);
    pieces.gage_insert(c.id, c.rule, c.parents);
    if (rng() % 4 == 0) pieces.gage_eval_pending();
  }
  whole.gage_eval_pending();
  pieces.gage_eval_pending();
  for (const auto& c : clauses) EXPECT_EQ(whole.gage_embedding(c.id), pieces.gage_embedding(c.id));
}

TEST(Gweight, LayeredMatchesNaiveRecursion) {
  Problem p = oracle::dag_signature_problem();
  prover::prepare_problem(p);
  Model model = init_model(small(), 6);
  oracle::NaiveModel naive(model, graph::build_graph(p));
  std::mt19937_64 rng(5);
  for (int round = 0; round < 10; ++round) {
    logic::TermBank bank = p.terms;
    auto terms = oracle::random_term_dag(p.symbols, bank, 1 + rng() % 200, rng);
    EvalState state(model, p);
    for (logic::TermId t : terms) {
      int polarity = static_cast<int>(rng() % 3) - 1;
      EXPECT_LE(oracle::max_abs_diff(naive.term(bank, t, polarity), state.term_embedding(t, polarity, bank)), 1e-10);
    }
  }
}

TEST(Gweight, VariablesAreConflated) {
  Problem p = parse("cnf(a, axiom, r(X, Y)).\ncnf(b, axiom, r(Y, X)).\ncnf(c, axiom, r(X, X)).\n");
  Model model = init_model(small(), 7);
  EvalState state(model, p);
  Tensor a = state.clause_term_embedding(p.clauses[0], p.terms);
  EXPECT_EQ(a, state.clause_term_embedding(p.clauses[1], p.terms));
  EXPECT_EQ(a, state.clause_term_embedding(p.clauses[2], p.terms));
  EXPECT_EQ(state.term_embedding(p.terms.variable(3), 0, p.terms), model.variable.value);
}

TEST(Gweight, ClauseIsSumOfLiterals) {
  Problem p = parse("cnf(a, axiom, p(f(X)) | ~q(a, X)).\n");
  Model model = init_model(small(), 8);
  EvalState state(model, p);
  const auto& c = p.clauses[0];
  Tensor l1 = state.term_embedding(c.literals[0].atom, c.literals[0].sign(), p.terms);
  Tensor l2 = state.term_embedding(c.literals[1].atom, c.literals[1].sign(), p.terms);
  Tensor sum(l1.rows(), 1);
  for (std::size_t i = 0; i < l1.size(); ++i) sum[i] = l1[i] + l2[i];
  EXPECT_EQ(state.clause_term_embedding(c, p.terms), sum);
}

TEST(Gweight, SharedSubtermsEmbeddedOnce) {
  std::string text;
  for (int i = 0; i < 10; ++i) {
    text += "cnf(c" + std::to_string(i) + ", axiom, " + (i % 2 ? "~" : "") + "q(f(g(a))) | r" + std::to_string(i) + ").\n";
  }
  Problem p = parse(text);
  Model model = init_model(small(), 9);
  EvalState state(model, p);
  std::vector<ClauseId> ids(10);
  for (ClauseId i = 0; i < 10; ++i) ids[i] = i;
  logic::ClauseStore store = p.make_store();
  state.score(ids, store);
  // a, g(a), f(g(a)), q(..) under both signs, and r0..r9.
  EXPECT_EQ(state.stats().gweight_nodes, 15u);
  state.score(ids, store);
  EXPECT_EQ(state.stats().gweight_nodes, 15u);
}

TEST(Score, MatchesNaiveOracleOnProverRun) {
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/group_inverse_unit.p");
  prover::prepare_problem(p);
  Model model = init_model(small(), 10);
  auto result = prove(model, p, 60, 1500);
  ASSERT_TRUE(result.trace);
  oracle::NaiveModel naive(model, graph::build_graph(p));
  auto context = logic::feature_context(p);

  EvalState state(model, p);
  std::vector<ClauseId> ids;
  for (const auto& c : result.store.clauses) {
    if (c.id >= p.clauses.size()) state.gage_insert(c.id, c.rule, c.parents);
    if (!c.empty()) ids.push_back(c.id);
  }
  state.gage_eval_pending();
  std::vector<double> logits = state.score(ids, result.store);
  for (std::size_t i = 0; i < ids.size(); i += 7) {
    EXPECT_NEAR(logits[i], naive.logit(result.store.clauses, result.store.terms, ids[i], context), 1e-10);
  }
  EXPECT_EQ(logits, state.score(ids, result.store));

  EvalState uncached(model, p, EvalOptions{false});
  for (const auto& c : result.store.clauses) {
    if (c.id >= p.clauses.size()) uncached.gage_insert(c.id, c.rule, c.parents);
  }
  uncached.gage_eval_pending();
  EXPECT_EQ(logits, uncached.score(ids, result.store));
}

TEST(Score, TrainingTapeAgreesWithInference) {
  Problem p = parse("cnf(a, axiom, p(f(X)) | ~q(X)).\ncnf(b, axiom, q(a)).\ncnf(c, negated_conjecture, ~p(f(a))).\n");
  Model model = init_model(small(), 11);
  auto result = prove(model, p);
  std::vector<ClauseId> ids;
  for (const auto& c : result.store.clauses) {
    if (!c.empty()) ids.push_back(c.id);
  }
  auto build = [&](EvalState& s) {
    for (const auto& c : result.store.clauses) {
      if (c.id >= p.clauses.size()) s.gage_insert(c.id, c.rule, c.parents);
    }
    s.gage_eval_pending();
  };
  EvalState infer(model, p);
  build(infer);
  Tape tape;
  EvalState train(model, p, tape);
  build(train);
  Var l = train.score_var(ids, result.store.clauses, result.store.terms);
  const Tensor& v = tape.value(l);
  EXPECT_EQ(std::vector<double>(v.data().begin(), v.data().end()), infer.score(ids, result.store));
}

TEST(Score, ZeroHeadGivesZero) {
  Problem p = parse("cnf(a, axiom, p(a) | q(X)).\ncnf(b, axiom, ~p(b)).\n");
  Model model = init_model(small(), 12);
  model.head_out.value.fill(0.0);
  EvalState state(model, p);
  logic::ClauseStore store = p.make_store();
  std::vector<ClauseId> ids{0, 1};
  EXPECT_EQ(state.score(ids, store), (std::vector<double>{0.0, 0.0}));
}

TEST(Score, HandComputedTinyHead) {
  Problem p = parse("cnf(a, axiom, p(a)).\n");
  Model model = init_model(small(2, 2, 1), 13);
  // Every term embeds to [1,-1] and the clause seed is [2,0].
  model.gweight.ln_gain.value.fill(0.0);
  model.gweight.ln_bias.value = Tensor::from_rows({{1}, {-1}});
  model.promote_clause.weight.value.fill(0.0);
  model.promote_clause.bias.value = Tensor::from_rows({{2}, {0}});
  Tensor w1(2, 16);
  w1(0, 0) = 1;  // w_C[0]
  w1(0, 2) = 1;  // a_C[0]
  w1(0, 5) = 1;  // weight feature
  w1(1, 1) = 1;  // w_C[1]
  model.head_hidden.weight.value = w1;
  model.head_hidden.bias.value = Tensor::from_rows({{0}, {3}});
  model.head_out.value = Tensor::from_rows({{1}, {-2}});
  EvalState state(model, p);
  logic::ClauseStore store = p.make_store();
  // h = relu([1 + 2 + 2, -1 + 3]) = [5, 2]; l = 5 - 4.
  EXPECT_EQ(state.score(std::vector<ClauseId>{0}, store), std::vector<double>{1.0});
}

TEST(Score, SymbolRenamingKeepsLogits) {
  const std::string text =
      "cnf(a, axiom, p(f(X), a) | ~q(X)).\ncnf(b, axiom, q(g(a, b))).\ncnf(c, negated_conjecture, ~p(f(g(a,b)), a)).\n";
  const std::string renamed =
      "cnf(a, axiom, big(succ(X), zero) | ~small(X)).\ncnf(b, axiom, small(pair(zero, one))).\n"
      "cnf(c, negated_conjecture, ~big(succ(pair(zero,one)), zero)).\n";
  Problem p1 = parse(text), p2 = parse(renamed);
  ASSERT_EQ(p1.symbols.size(), p2.symbols.size());
  Model model = init_model(small(), 14);
  auto r1 = prove(model, p1), r2 = prove(model, p2);
  ASSERT_EQ(r1.store.size(), r2.store.size());
  EvalState s1(model, p1), s2(model, p2);
  std::vector<ClauseId> ids;
  for (const auto& c : r1.store.clauses) {
    if (c.id >= p1.clauses.size()) {
      s1.gage_insert(c.id, c.rule, c.parents);
      s2.gage_insert(c.id, r2.store[c.id].rule, r2.store[c.id].parents);
    }
    if (!c.empty()) ids.push_back(c.id);
  }
  s1.gage_eval_pending();
  s2.gage_eval_pending();
  EXPECT_EQ(s1.score(ids, r1.store), s2.score(ids, r2.store));
}

TEST(Persistence, RoundTripIsBitExact) {
  Model model = init_model(small(), 15);
  std::stringstream buffer;
  save_model(buffer, model);
  Model loaded = load_model(buffer);
  EXPECT_EQ(loaded.hp, model.hp);
  auto a = model.parameters();
  auto b = loaded.parameters();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i]->value, b[i]->value);

  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/php_2.p");
  prover::prepare_problem(p);
  auto run = prove(model, p, 50);
  std::vector<ClauseId> ids;
  for (const auto& c : run.store.clauses) {
    if (!c.empty() && ids.size() < 20) ids.push_back(c.id);
  }
  auto scores = [&](const Model& m) {
    EvalState s(m, p);
    for (const auto& c : run.store.clauses) {
      if (c.id >= p.clauses.size()) s.gage_insert(c.id, c.rule, c.parents);
    }
    s.gage_eval_pending();
    return s.score(ids, run.store);
  };
  EXPECT_EQ(ids.size(), 20u);
  EXPECT_EQ(scores(model), scores(loaded));
}

TEST(Persistence, Errors) {
  Model model = init_model(small(), 16);
  std::ostringstream out;
  save_model(out, model);
  const std::string bytes = out.str();

  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream v(bad_version);
  try {
    load_model(v);
    FAIL();
  } catch (const ModelFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("version 9"), std::string::npos) << e.what();
  }

  std::istringstream t(bytes.substr(0, bytes.size() / 2));
  try {
    load_model(t);
    FAIL();
  } catch (const ModelFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("tensor"), std::string::npos) << e.what();
  }

  std::string bad_header = bytes;
  bad_header[8] = 7;  // n from 6 to 7
  std::istringstream h(bad_header);
  EXPECT_THROW(load_model(h), ModelFormatError);

  std::istringstream junk("not a model");
  EXPECT_THROW(load_model(junk), ModelFormatError);
  EXPECT_THROW(load_model(std::string("/nonexistent/model.bin")), ModelFormatError);
}

TEST(Evaluator, TinyModelProvesEndToEnd) {
  Model model = init_model(small(1, 1, 1), 17);
  Problem p = logic::load_problem(oracle::data_dir() + "/unsat/fo_chain_4.p");
  prover::prepare_problem(p);
  auto result = prove(model, p, 5000);
  EXPECT_EQ(result.outcome, prover::Outcome::Refutation);
}

TEST(Evaluator, DefaultModelSolvesCorpusSample) {
  Model model = init_model(HyperParams{}, 18);
  for (const char* name : {"syllogism", "chain_05", "fo_chain_5", "php_2"}) {
    Problem p = logic::load_problem(oracle::data_dir() + "/unsat/" + name + ".p");
    prover::prepare_problem(p);
    auto result = prove(model, p, 5000);
    EXPECT_EQ(result.outcome, prover::Outcome::Refutation) << name;
    std::map<ClauseId, const logic::Clause*> index;
    for (const auto& c : result.store.clauses) index[c.id] = &c;
    EXPECT_EQ(oracle::check_refutation(p, result.store.terms, index, *result.empty_clause), "") << name;
  }
}
