#include "saturn/prover/passive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saturn::prover {

void PassiveSet::retain_pending(const std::function<bool(ClauseId)>& keep) {
  std::vector<ClauseId> kept;
  kept.reserve(pending_.size());
  for (ClauseId id : pending_) {
    if (keep(id)) kept.push_back(id);
  }
  pending_ = std::move(kept);
}

std::vector<ClauseId> PassiveSet::flush_pending(const ClauseStore& store) {
  std::vector<ClauseId> batch = std::move(pending_);
  pending_.clear();
  if (!batch.empty()) admit(batch, store);
  return batch;
}

ClauseId PassiveSet::select(const ClauseStore& store) {
  if (!pending_.empty()) throw std::logic_error("selection with unflushed pending clauses");
  if (empty()) throw std::logic_error("selection from an empty passive set");
  return pop(store);
}

BaselinePassive::BaselinePassive(std::uint32_t age_picks, std::uint32_t weight_picks)
    : age_picks_(age_picks), weight_picks_(weight_picks) {
  if (age_picks_ + weight_picks_ == 0) throw std::invalid_argument("age/weight ratio must not be 0:0");
}

void BaselinePassive::admit(std::span<const ClauseId> batch, const ClauseStore& store) {
  for (ClauseId id : batch) {
    Keys k{store[id].age, sequence_++, logic::clause_weight(store.terms, store[id])};
    age_queue_.emplace(k.age, k.sequence, id);
    weight_queue_.emplace(k.weight, id);
    keys_.emplace(id, k);
  }
}

ClauseId BaselinePassive::pop(const ClauseStore&) {
  std::uint64_t phase = step_++ % (age_picks_ + weight_picks_);
  ClauseId id = phase < age_picks_ ? std::get<2>(*age_queue_.begin()) : std::get<1>(*weight_queue_.begin());
  const Keys& k = keys_.at(id);
  age_queue_.erase({k.age, k.sequence, id});
  weight_queue_.erase({k.weight, id});
  keys_.erase(id);
  return id;
}

double gumbel_sample(std::mt19937_64& rng) {
  // 53 random bits mapped to the open interval (0, 1).
  double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(-std::log(u));
}

NeuralPassive::NeuralPassive(ClauseEvaluator& evaluator, double temperature, std::uint64_t seed, bool fairness_fallback)
    : evaluator_(evaluator), temperature_(temperature), rng_(seed), fairness_fallback_(fairness_fallback) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw std::invalid_argument("temperature must be >= 0");
}

void NeuralPassive::admit(std::span<const ClauseId> batch, const ClauseStore& store) {
  std::vector<double> logits = evaluator_.evaluate(batch, store);
  ++evaluation_calls_;
  if (logits.size() != batch.size()) throw std::runtime_error("evaluator returned a wrong number of scores");
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ClauseId id = batch[i];
    if (!std::isfinite(logits[i])) throw std::runtime_error("evaluator returned a non-finite score");
    ClauseScore score{logits[i], temperature_ > 0.0 ? gumbel_sample(rng_) : 0.0};
    double key = score.logit + temperature_ * score.noise;
    scores_.emplace(id, score);
    keys_.emplace(id, key);
    queue_.emplace(key, id);
    if (fairness_fallback_) by_age_.emplace(store[id].age, id);
  }
}

void NeuralPassive::erase(ClauseId id) {
  queue_.erase({keys_.at(id), id});
  keys_.erase(id);
}

ClauseId NeuralPassive::pop(const ClauseStore& store) {
  ++selections_;
  ClauseId id;
  if (fairness_fallback_ && selections_ % kFairnessPeriod == 0) {
    id = by_age_.begin()->second;
  } else {
    id = queue_.begin()->second;
  }
  erase(id);
  if (fairness_fallback_) by_age_.erase({store[id].age, id});
  return id;
}

std::optional<ClauseScore> NeuralPassive::score(ClauseId id) const {
  auto it = scores_.find(id);
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

}  // namespace saturn::prover
