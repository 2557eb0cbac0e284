#include "saturn/model/eval_state.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "saturn/graph/cnf_graph.hpp"
#include "saturn/model/gnn.hpp"

namespace saturn::model {

struct EvalState::Frame {
  Frame(Tape& t, const Model& m) : tape(t), vars(t, m) { zero = tape.constant(Tensor(m.hp.n, 1)); }
  Frame(Tape& t, Model& m) : tape(t), vars(t, m) { zero = tape.constant(Tensor(m.hp.n, 1)); }

  Tape& tape;
  ModelVars vars;
  Var symbols;
  Var zero;
};

/// Embedding columns by key, either as (tape node, column) references or as
/// copied values.
class EvalState::Table {
 public:
  Table(std::size_t n, const Tape* training_tape) : n_(n), tape_(training_tape) {}

  bool contains(std::uint64_t key) const { return tape_ ? refs_.contains(key) : slots_.contains(key); }

  void put(const Tape& tape, Var block, std::span<const std::uint64_t> keys) {
    if (tape_) {
      for (std::size_t j = 0; j < keys.size(); ++j) refs_[keys[j]] = {block, static_cast<std::uint32_t>(j)};
      return;
    }
    const Tensor& v = tape.value(block);
    for (std::size_t j = 0; j < keys.size(); ++j) {
      slots_[keys[j]] = values_.size() / n_;
      for (std::size_t r = 0; r < n_; ++r) values_.push_back(v(r, j));
    }
  }

  /// Node whose columns are the embeddings of `keys`, in order.
  Var pool(Tape& tape, std::span<const std::uint64_t> keys) const {
    if (!tape_) {
      Tensor out(n_, keys.size());
      for (std::size_t j = 0; j < keys.size(); ++j) {
        const double* col = &values_[slot(keys[j]) * n_];
        for (std::size_t r = 0; r < n_; ++r) out(r, j) = col[r];
      }
      return tape.constant(std::move(out));
    }
    // Gather per source block, then restore the requested order.
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_block;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> where(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
      auto [block, col] = ref(keys[j]);
      auto& cols = by_block[block.index];
      where[j] = {block.index, static_cast<std::uint32_t>(cols.size())};
      cols.push_back(col);
    }
    if (by_block.size() == 1) return tape.gather_columns(Var{by_block.begin()->first}, by_block.begin()->second);
    std::vector<Var> pieces;
    std::unordered_map<std::uint32_t, std::uint32_t> offset;
    std::uint32_t total = 0;
    for (auto& [block, cols] : by_block) {
      offset[block] = total;
      total += static_cast<std::uint32_t>(cols.size());
      pieces.push_back(tape.gather_columns(Var{block}, cols));
    }
    std::vector<std::uint32_t> order(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) order[j] = offset[where[j].first] + where[j].second;
    return tape.gather_columns(tape.concat_cols(pieces), std::move(order));
  }

  Tensor get(std::uint64_t key) const {
    Tensor out(n_, 1);
    if (tape_) {
      auto [block, col] = ref(key);
      const Tensor& v = tape_->value(block);
      for (std::size_t r = 0; r < n_; ++r) out[r] = v(r, col);
    } else {
      const double* col = &values_[slot(key) * n_];
      for (std::size_t r = 0; r < n_; ++r) out[r] = col[r];
    }
    return out;
  }

 private:
  std::size_t slot(std::uint64_t key) const {
    auto it = slots_.find(key);
    if (it == slots_.end()) throw std::logic_error("embedding requested before it was computed");
    return it->second;
  }
  std::pair<Var, std::uint32_t> ref(std::uint64_t key) const {
    auto it = refs_.find(key);
    if (it == refs_.end()) throw std::logic_error("embedding requested before it was computed");
    return it->second;
  }

  std::size_t n_;
  const Tape* tape_;
  std::unordered_map<std::uint64_t, std::pair<Var, std::uint32_t>> refs_;
  std::unordered_map<std::uint64_t, std::size_t> slots_;
  std::vector<double> values_;
};

namespace {

/// Two-layer MLP with LayerNorm; a single-row embedding cannot be
/// normalized and is passed through.
Var combine(Tape& tape, const std::array<Var, 6>& p, Var x) {
  Var h = tape.relu(tape.affine(p[0], x, p[1]));
  Var y = tape.affine(p[2], h, p[3]);
  if (tape.value(y).rows() < 2) return y;
  return tape.layer_norm(y, p[4], p[5]);
}

}  // namespace

template <typename F>
auto EvalState::with_frame(F&& f) {
  if (training_) return f(*training_);
  Tape tape(false);
  Frame frame(tape, model_);
  frame.symbols = tape.constant(symbols_);
  return f(frame);
}

EvalState::EvalState(const Model& model, const logic::Problem& problem, EvalOptions options)
    : model_(model), options_(options), input_count_(problem.clauses.size()), features_(logic::feature_context(problem)) {
  gage_table_ = std::make_unique<Table>(model.hp.n, nullptr);
  term_table_ = std::make_unique<Table>(model.hp.n, nullptr);
  Tape tape(false);
  Frame frame(tape, model_);
  seed(frame, problem);
  symbols_ = tape.value(frame.symbols);
}

EvalState::EvalState(Model& model, const logic::Problem& problem, Tape& tape, EvalOptions options)
    : model_(model), options_(options), input_count_(problem.clauses.size()), features_(logic::feature_context(problem)) {
  if (!tape.recording()) throw std::invalid_argument("training evaluation needs a recording tape");
  gage_table_ = std::make_unique<Table>(model.hp.n, &tape);
  term_table_ = std::make_unique<Table>(model.hp.n, &tape);
  training_ = std::make_unique<Frame>(tape, model);
  seed(*training_, problem);
}

EvalState::~EvalState() = default;

void EvalState::seed(Frame& frame, const logic::Problem& problem) {
  GnnOutput gnn = run_gnn(frame.tape, frame.vars, graph::build_graph(problem));
  frame.symbols = gnn.symbols;
  std::vector<std::uint64_t> keys(input_count_);
  for (std::size_t i = 0; i < input_count_; ++i) {
    keys[i] = i;
    heights_[static_cast<ClauseId>(i)] = 0;
  }
  gage_table_->put(frame.tape, gnn.clauses, keys);
}

void EvalState::gage_insert(ClauseId id, logic::Rule rule, std::span<const ClauseId> parents) {
  if (heights_.contains(id)) throw std::invalid_argument("clause " + std::to_string(id) + " inserted twice");
  std::uint32_t level = base_level_;
  for (ClauseId p : parents) {
    auto it = heights_.find(p);
    if (it == heights_.end()) throw std::invalid_argument("unknown parent clause " + std::to_string(p));
    level = std::max(level, it->second + 1);
  }
  heights_[id] = level;
  std::size_t index = level - base_level_;
  if (todo_layers_.size() <= index) todo_layers_.resize(index + 1);
  todo_layers_[index].push_back(Pending{id, rule, std::vector<ClauseId>(parents.begin(), parents.end())});
}

void EvalState::gage_eval_pending() {
  if (todo_layers_.empty()) return;
  with_frame([&](Frame& frame) {
    for (const auto& layer : todo_layers_) {
      if (!layer.empty()) gage_layer(frame, layer);
    }
    return 0;
  });
  base_level_ += static_cast<std::uint32_t>(todo_layers_.size());
  todo_layers_.clear();
}

void EvalState::gage_layer(Frame& frame, const std::vector<Pending>& layer) {
  Tape& tape = frame.tape;
  std::vector<std::uint64_t> parent_keys;
  std::unordered_map<std::uint64_t, std::uint32_t> column;
  for (const Pending& p : layer) {
    for (ClauseId parent : p.parents) {
      if (column.emplace(parent, static_cast<std::uint32_t>(parent_keys.size() + 1)).second) parent_keys.push_back(parent);
    }
  }
  std::vector<Var> parts{frame.zero};
  if (!parent_keys.empty()) parts.push_back(gage_table_->pool(tape, parent_keys));
  Var pool = tape.concat_cols(parts);

  std::vector<std::uint32_t> rules, first;
  std::vector<std::vector<std::uint32_t>> rest(layer.size());
  for (std::size_t j = 0; j < layer.size(); ++j) {
    const Pending& p = layer[j];
    rules.push_back(static_cast<std::uint32_t>(p.rule));
    first.push_back(p.parents.empty() ? 0 : column.at(p.parents[0]));
    for (std::size_t i = 1; i < p.parents.size(); ++i) rest[j].push_back(column.at(p.parents[i]));
  }
  std::vector<Var> inputs{tape.gather_columns(frame.vars.rules, std::move(rules)), tape.gather_columns(pool, std::move(first)),
                          tape.group_mean(pool, std::move(rest))};
  Var out = combine(tape, frame.vars.gage, tape.concat_rows(inputs));

  std::vector<std::uint64_t> keys;
  for (const Pending& p : layer) keys.push_back(p.id);
  gage_table_->put(tape, out, keys);
  ++stats_.gage_layers;
  stats_.gage_nodes += layer.size();
}

std::uint32_t EvalState::height(ClauseId id) const {
  auto it = heights_.find(id);
  if (it == heights_.end()) throw std::out_of_range("clause " + std::to_string(id) + " has no height");
  return it->second;
}

std::vector<std::size_t> EvalState::pending_layer_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& layer : todo_layers_) out.push_back(layer.size());
  return out;
}

void EvalState::gweight_embed(Frame& frame, Table& table, std::span<const std::uint64_t> keys, const logic::TermBank& terms) {
  // Missing nodes bucketed by term height; arguments are always lower.
  std::map<std::uint32_t, std::vector<std::uint64_t>> layers;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> stack(keys.begin(), keys.end());
  while (!stack.empty()) {
    std::uint64_t key = stack.back();
    stack.pop_back();
    if (table.contains(key) || !seen.insert(key).second) continue;
    const logic::TermNode& node = terms[static_cast<logic::TermId>(key >> 2)];
    layers[node.height].push_back(key);
    for (logic::TermId arg : node.args) {
      if (!terms[arg].is_variable) stack.push_back(term_key(arg, 0));
    }
  }

  Tape& tape = frame.tape;
  for (auto& [height, layer] : layers) {
    std::sort(layer.begin(), layer.end());
    std::vector<std::uint64_t> arg_keys;
    std::unordered_map<std::uint64_t, std::uint32_t> column;
    auto column_of = [&](logic::TermId arg) -> std::uint32_t {
      if (terms[arg].is_variable) return 1;
      std::uint64_t k = term_key(arg, 0);
      auto [it, fresh] = column.emplace(k, static_cast<std::uint32_t>(arg_keys.size() + 2));
      if (fresh) arg_keys.push_back(k);
      return it->second;
    };

    std::vector<std::uint32_t> functors, first;
    std::vector<std::vector<std::uint32_t>> rest(layer.size());
    Tensor polarity(1, layer.size());
    for (std::size_t j = 0; j < layer.size(); ++j) {
      const logic::TermNode& node = terms[static_cast<logic::TermId>(layer[j] >> 2)];
      functors.push_back(node.head);
      polarity[j] = static_cast<double>(static_cast<int>(layer[j] & 3) - 1);
      first.push_back(node.args.empty() ? 0 : column_of(node.args[0]));
      for (std::size_t i = 1; i < node.args.size(); ++i) rest[j].push_back(column_of(node.args[i]));
    }
    std::vector<Var> parts{frame.zero, frame.vars.variable};
    if (!arg_keys.empty()) parts.push_back(table.pool(tape, arg_keys));
    Var pool = tape.concat_cols(parts);
    std::vector<Var> inputs{tape.gather_columns(frame.symbols, std::move(functors)), tape.constant(std::move(polarity)),
                            tape.gather_columns(pool, std::move(first)), tape.group_mean(pool, std::move(rest))};
    Var out = combine(tape, frame.vars.gweight, tape.concat_rows(inputs));
    table.put(tape, out, layer);
    ++stats_.gweight_layers;
    stats_.gweight_nodes += layer.size();
  }
}

Var EvalState::clause_term_embeddings(Frame& frame, std::span<const logic::Clause* const> clauses, const logic::TermBank& terms) {
  Tape& tape = frame.tape;
  auto embed = [&](Table& table, std::span<const logic::Clause* const> batch) {
    std::vector<std::uint64_t> keys;
    std::unordered_map<std::uint64_t, std::uint32_t> column;
    std::vector<std::vector<std::uint32_t>> groups(batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j) {
      for (const logic::Literal& lit : batch[j]->literals) {
        std::uint64_t k = term_key(lit.atom, lit.sign());
        auto [it, fresh] = column.emplace(k, static_cast<std::uint32_t>(keys.size()));
        if (fresh) keys.push_back(k);
        groups[j].push_back(it->second);
      }
    }
    gweight_embed(frame, table, keys, terms);
    std::vector<Var> parts{frame.zero};
    if (!keys.empty()) parts.push_back(table.pool(tape, keys));
    Var pool = tape.concat_cols(parts);
    for (auto& g : groups) {
      for (auto& c : g) ++c;
    }
    return tape.group_sum(pool, std::move(groups));
  };

  if (options_.cache_terms) return embed(*term_table_, clauses);
  std::vector<Var> columns;
  for (const logic::Clause* clause : clauses) {
    Table scratch(model_.hp.n, training_ ? &tape : nullptr);
    columns.push_back(embed(scratch, std::span<const logic::Clause* const>(&clause, 1)));
  }
  if (columns.empty()) return tape.constant(Tensor(model_.hp.n, 0));
  return tape.concat_cols(columns);
}

Var EvalState::logits(Frame& frame, std::span<const logic::Clause* const> clauses, const logic::TermBank& terms) {
  Tape& tape = frame.tape;
  Var w = clause_term_embeddings(frame, clauses, terms);
  std::vector<std::uint64_t> ids;
  Tensor features(model_.hp.f, clauses.size());
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    ids.push_back(clauses[j]->id);
    logic::SimpleFeatures s = logic::simple_features(*clauses[j], terms, features_);
    for (std::size_t i = 0; i < s.size(); ++i) features(i, j) = s[i];
  }
  Var a = ids.empty() ? tape.constant(Tensor(model_.hp.n, 0)) : gage_table_->pool(tape, ids);
  std::vector<Var> rows{w, a, tape.constant(std::move(features))};
  const ModelVars& v = frame.vars;
  Var h = tape.relu(tape.affine(v.head_hidden.first, tape.concat_rows(rows), v.head_hidden.second));
  return tape.matmul_tn(v.head_out, h);
}

std::vector<double> EvalState::score(std::span<const ClauseId> ids, const logic::ClauseStore& store) {
  std::vector<const logic::Clause*> clauses;
  for (ClauseId id : ids) clauses.push_back(&store[id]);
  return with_frame([&](Frame& frame) {
    const Tensor& l = frame.tape.value(logits(frame, clauses, store.terms));
    return std::vector<double>(l.data().begin(), l.data().end());
  });
}

Var EvalState::score_var(std::span<const ClauseId> ids, const std::vector<logic::Clause>& clauses, const logic::TermBank& terms) {
  if (!training_) throw std::logic_error("score_var needs a training evaluation state");
  std::vector<const logic::Clause*> batch;
  for (ClauseId id : ids) batch.push_back(&clauses.at(id));
  return logits(*training_, batch, terms);
}

Tensor EvalState::gage_embedding(ClauseId id) const { return gage_table_->get(id); }

Tensor EvalState::term_embedding(logic::TermId term, int polarity, const logic::TermBank& terms) {
  if (terms[term].is_variable) return model_.variable.value;
  return with_frame([&](Frame& frame) {
    std::uint64_t key = term_key(term, polarity);
    if (options_.cache_terms) {
      gweight_embed(frame, *term_table_, std::span<const std::uint64_t>(&key, 1), terms);
      return term_table_->get(key);
    }
    Table scratch(model_.hp.n, training_ ? &frame.tape : nullptr);
    gweight_embed(frame, scratch, std::span<const std::uint64_t>(&key, 1), terms);
    return scratch.get(key);
  });
}

Tensor EvalState::clause_term_embedding(const logic::Clause& clause, const logic::TermBank& terms) {
  return with_frame([&](Frame& frame) {
    const logic::Clause* c = &clause;
    return frame.tape.value(clause_term_embeddings(frame, std::span<const logic::Clause* const>(&c, 1), terms));
  });
}

}  // namespace saturn::model
