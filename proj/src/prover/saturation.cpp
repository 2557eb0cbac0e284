#include "saturn/prover/saturation.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "saturn/logic/features.hpp"
#include "saturn/prover/inference.hpp"

namespace saturn::prover {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t literal_key(const logic::TermBank& bank, bool positive, logic::TermId atom) {
  return (static_cast<std::uint64_t>(bank[atom].head) << 1) | (positive ? 1u : 0u);
}

class Engine {
 public:
  Engine(const logic::Problem& problem, PassiveSet& passive, const SaturationOptions& options)
      : problem_(problem), passive_(passive), options_(options) {}

  SaturationResult run() {
    result_.store = problem_.make_store();
    const std::size_t inputs = problem_.clauses.size();
    if (options_.record_trace) {
      Trace& trace = result_.trace.emplace();
      trace.problem_id = problem_.name;
      trace.symbols = problem_.symbols;
      for (const Clause& c : problem_.clauses) trace.clauses.push_back(TraceClause{c, false});
    }
    const auto start = Clock::now();

    for (ClauseId id = 0; id < inputs; ++id) {
      const Clause& c = store()[id];
      if (c.empty()) return refute(id);
      if (is_tautology(c)) {
        ++result_.stats.tautologies;
        mark_input_deleted(id);
        continue;
      }
      passive_.enqueue(id);
    }

    std::vector<ClauseId> added_since_selection;
    std::optional<ClauseId> last_selected;
    while (true) {
      passive_.retain_pending([&](ClauseId id) {
        if (forward_subsumed(store()[id])) {
          ++result_.stats.subsumed;
          if (id < inputs) mark_input_deleted(id);
          return false;
        }
        keep(id);
        return true;
      });
      std::vector<ClauseId> admitted = passive_.flush_pending(store());
      if (result_.trace) {
        for (ClauseId id : admitted) {
          if (id >= inputs) result_.trace->clauses.push_back(TraceClause{store()[id], false});
        }
      }
      added_since_selection.insert(added_since_selection.end(), admitted.begin(), admitted.end());
      result_.stats.passive_peak = std::max<std::uint64_t>(result_.stats.passive_peak, passive_.size());

      // A capped activation may have skipped inferences, so this check comes first.
      if (options_.max_generated && result_.stats.generated >= *options_.max_generated) return finish(Outcome::ResourceOut);
      if (passive_.empty()) return finish(result_.stats.too_deep ? Outcome::ResourceOut : Outcome::Saturated);
      if (result_.stats.activations >= options_.max_activations) return finish(Outcome::ResourceOut);
      if (options_.time_limit && Clock::now() - start >= *options_.time_limit) return finish(Outcome::ResourceOut);

      ClauseId given = passive_.select(store());
      if (result_.trace) {
        SelectionStep step;
        step.selected = given;
        step.added = std::move(added_since_selection);
        if (last_selected) step.removed.push_back(*last_selected);
        result_.trace->steps.push_back(std::move(step));
      }
      added_since_selection.clear();
      last_selected = given;
      ++result_.stats.activations;
      ++result_.stats.selection_steps;

      if (auto empty = activate(given)) return refute(*empty);
    }
  }

 private:
  logic::ClauseStore& store() { return result_.store; }

  void mark_input_deleted(ClauseId id) {
    if (result_.trace) result_.trace->clauses[id].deleted = true;
  }

  void keep(ClauseId id) {
    const Clause& c = store()[id];
    kept_[literal_key(store().terms, c.literals[0].positive, c.literals[0].atom)].push_back(id);
  }

  bool forward_subsumed(const Clause& clause) {
    std::unordered_set<std::uint64_t> keys;
    for (const Literal& lit : clause.literals) keys.insert(literal_key(store().terms, lit.positive, lit.atom));
    std::size_t effort = kSubsumptionEffort;
    for (std::uint64_t key : keys) {
      auto it = kept_.find(key);
      if (it == kept_.end()) continue;
      for (ClauseId other : it->second) {
        if (subsumes(store().terms, store()[other], clause, effort)) return true;
        if (effort == 0) return false;
      }
    }
    return false;
  }

  /// Returns the id of the empty clause if one was derived.
  std::optional<ClauseId> activate(ClauseId given_id) {
    const Clause given = store()[given_id];
    for (std::uint32_t i = 0; i < given.literals.size(); ++i) {
      active_[literal_key(store().terms, given.literals[i].positive, given.literals[i].atom)].emplace_back(given_id, i);
    }

    const std::uint64_t cap = options_.max_generated.value_or(UINT64_MAX);
    for (Clause& f : factor(store().terms, given)) {
      if (auto empty = add_conclusion(std::move(f))) return empty;
      if (result_.stats.generated >= cap) return std::nullopt;
    }
    for (std::uint32_t i = 0; i < given.literals.size(); ++i) {
      const Literal& lit = given.literals[i];
      auto it = active_.find(literal_key(store().terms, !lit.positive, lit.atom));
      if (it == active_.end()) continue;
      // Conclusions only enter the passive buffer, so this list is stable.
      const auto& partners = it->second;
      for (auto [partner, j] : partners) {
        if (partner == given_id && j < i) continue;
        auto resolvent = resolve(store().terms, given, i, store()[partner], j);
        if (!resolvent) continue;
        if (auto empty = add_conclusion(std::move(*resolvent))) return empty;
        if (result_.stats.generated >= cap) return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<ClauseId> add_conclusion(Clause clause) {
    ++result_.stats.generated;
    logic::inherit_from_parents(clause, store().clauses);
    if (clause.empty()) return store().add(std::move(clause));
    if (is_tautology(clause)) {
      ++result_.stats.tautologies;
      return std::nullopt;
    }
    for (const Literal& lit : clause.literals) {
      if (store().terms[lit.atom].height > options_.max_term_height) {
        ++result_.stats.too_deep;
        return std::nullopt;
      }
    }
    passive_.enqueue(store().add(std::move(clause)));
    return std::nullopt;
  }

  SaturationResult refute(ClauseId empty) {
    result_.empty_clause = empty;
    result_.proof = ancestor_closure(store().clauses, empty);
    if (result_.trace && empty >= problem_.clauses.size()) {
      result_.trace->clauses.push_back(TraceClause{store()[empty], false});
    }
    return finish(Outcome::Refutation);
  }

  SaturationResult finish(Outcome outcome) {
    result_.outcome = outcome;
    if (result_.trace) {
      result_.trace->outcome = outcome;
      result_.trace->proof = result_.proof;
      result_.trace->stats = result_.stats;
      result_.trace->terms = store().terms;
    }
    return std::move(result_);
  }

  const logic::Problem& problem_;
  PassiveSet& passive_;
  const SaturationOptions& options_;
  SaturationResult result_;
  std::unordered_map<std::uint64_t, std::vector<ClauseId>> kept_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<ClauseId, std::uint32_t>>> active_;
};

}  // namespace

SaturationResult saturate(const logic::Problem& problem, PassiveSet& passive, const SaturationOptions& options) {
  if (options.max_activations == 0) throw std::invalid_argument("activation budget must be positive");
  Engine engine(problem, passive, options);
  return engine.run();
}

std::vector<ClauseId> ancestor_closure(const std::vector<Clause>& clauses, ClauseId root) {
  std::vector<bool> seen(clauses.size(), false);
  std::vector<ClauseId> stack{root};
  std::vector<ClauseId> out;
  while (!stack.empty()) {
    ClauseId id = stack.back();
    stack.pop_back();
    if (seen.at(id)) continue;
    seen[id] = true;
    out.push_back(id);
    for (ClauseId p : clauses[id].parents) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

logic::Problem shuffle_problem(const logic::Problem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto permute = [&rng](std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    return order;
  };

  logic::Problem out;
  out.name = problem.name;
  out.symbols = problem.symbols;
  out.terms = problem.terms;
  for (std::size_t src : permute(problem.clauses.size())) {
    logic::Clause c = problem.clauses[src];
    std::vector<logic::Literal> lits;
    for (std::size_t k : permute(c.literals.size())) lits.push_back(c.literals[k]);
    c.literals = normalize_variables(out.terms, lits);
    c.id = static_cast<ClauseId>(out.clauses.size());
    out.clauses.push_back(std::move(c));
    out.clause_names.push_back(src < problem.clause_names.size() ? problem.clause_names[src] : "c" + std::to_string(src));
    out.roles.push_back(src < problem.roles.size() ? problem.roles[src] : logic::Role::Axiom);
  }
  return out;
}

void prepare_problem(logic::Problem& problem) { logic::compute_sine_levels(problem); }

}  // namespace saturn::prover
