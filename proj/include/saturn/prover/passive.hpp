#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "saturn/logic/clause.hpp"

namespace saturn::prover {

using logic::ClauseId;
using logic::ClauseStore;

/// Scores freshly derived clauses. Implementations see each clause once.
class ClauseEvaluator {
 public:
  virtual ~ClauseEvaluator() = default;
  virtual std::vector<double> evaluate(std::span<const ClauseId> batch, const ClauseStore& store) = 0;
};

/// The passive set with its buffer of clauses awaiting insertion. Clauses
/// enter the buffer via enqueue(), may be dropped from it by
/// retain_pending(), and become selectable after flush_pending().
class PassiveSet {
 public:
  virtual ~PassiveSet() = default;

  void enqueue(ClauseId id) { pending_.push_back(id); }
  const std::vector<ClauseId>& pending() const { return pending_; }
  /// Keeps only buffered clauses for which `keep` returns true, in order.
  void retain_pending(const std::function<bool(ClauseId)>& keep);
  /// Admits every buffered clause in one batch; returns the admitted ids.
  std::vector<ClauseId> flush_pending(const ClauseStore& store);

  /// Pops the next clause. Requires an empty buffer and a non-empty set.
  ClauseId select(const ClauseStore& store);

  virtual std::size_t size() const = 0;
  bool empty() const { return size() == 0; }

 protected:
  virtual void admit(std::span<const ClauseId> batch, const ClauseStore& store) = 0;
  virtual ClauseId pop(const ClauseStore& store) = 0;

 private:
  std::vector<ClauseId> pending_;
};

/// Age and weight queues over the same clause set, alternated under a ratio.
class BaselinePassive final : public PassiveSet {
 public:
  explicit BaselinePassive(std::uint32_t age_picks = 1, std::uint32_t weight_picks = 1);

  std::size_t size() const override { return age_queue_.size(); }

 protected:
  void admit(std::span<const ClauseId> batch, const ClauseStore& store) override;
  ClauseId pop(const ClauseStore& store) override;

 private:
  struct Keys {
    std::uint32_t age;
    std::uint64_t sequence;
    std::uint32_t weight;
  };
  std::uint32_t age_picks_;
  std::uint32_t weight_picks_;
  std::uint64_t step_ = 0;
  std::uint64_t sequence_ = 0;
  std::set<std::tuple<std::uint32_t, std::uint64_t, ClauseId>> age_queue_;
  std::set<std::tuple<std::uint32_t, ClauseId>> weight_queue_;
  std::unordered_map<ClauseId, Keys> keys_;
};

struct ClauseScore {
  double logit = 0.0;
  double noise = 0.0;
};

/// Gumbel noise -log(-log(u)) for u uniform on the open unit interval.
double gumbel_sample(std::mt19937_64& rng);

/// Single queue ordered by descending logit + temperature * frozen noise,
/// ties broken by lower clause id.
class NeuralPassive final : public PassiveSet {
 public:
  NeuralPassive(ClauseEvaluator& evaluator, double temperature, std::uint64_t seed, bool fairness_fallback = false);

  std::size_t size() const override { return queue_.size(); }

  std::optional<ClauseScore> score(ClauseId id) const;
  std::size_t evaluation_calls() const { return evaluation_calls_; }
  std::size_t evaluated_clauses() const { return scores_.size(); }

  static constexpr std::uint64_t kFairnessPeriod = 64;

 protected:
  void admit(std::span<const ClauseId> batch, const ClauseStore& store) override;
  ClauseId pop(const ClauseStore& store) override;

 private:
  struct Order {
    bool operator()(const std::pair<double, ClauseId>& a, const std::pair<double, ClauseId>& b) const {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    }
  };
  void erase(ClauseId id);

  ClauseEvaluator& evaluator_;
  double temperature_;
  std::mt19937_64 rng_;
  bool fairness_fallback_;
  std::uint64_t selections_ = 0;
  std::size_t evaluation_calls_ = 0;
  std::set<std::pair<double, ClauseId>, Order> queue_;
  std::set<std::pair<std::uint32_t, ClauseId>> by_age_;
  std::unordered_map<ClauseId, ClauseScore> scores_;
  std::unordered_map<ClauseId, double> keys_;
};

}  // namespace saturn::prover
