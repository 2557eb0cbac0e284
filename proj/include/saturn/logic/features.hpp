#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "saturn/logic/clause.hpp"
#include "saturn/logic/problem.hpp"

namespace saturn::logic {

/// Assigns SInE levels to the input clauses of `problem` (goal clauses get 0,
/// unreachable clauses stay unset) and returns the largest level assigned.
/// Symbol generality is the number of non-goal clauses a symbol occurs in; a
/// clause is triggered by each of its symbols whose generality does not
/// exceed the clause minimum (tolerance 1).
std::uint32_t compute_sine_levels(Problem& problem);

inline constexpr std::size_t kSimpleFeatureCount = 12;

/// Feature order: age, weight, posLen, negLen, justEq, justNeq, numVarOcc,
/// numVarOccNorm, fromGoal, sineMaxed, sineLevelNorm, numSplits.
using SimpleFeatures = std::array<double, kSimpleFeatureCount>;

struct FeatureContext {
  std::int64_t equality_symbol = -1;
  std::uint32_t max_sine_level = 0;
};

/// Context from a problem whose SInE levels are already computed.
FeatureContext feature_context(const Problem& problem);

SimpleFeatures simple_features(const Clause& clause, const TermBank& terms, const FeatureContext& context);

}  // namespace saturn::logic
