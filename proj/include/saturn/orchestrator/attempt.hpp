#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "saturn/logic/problem.hpp"
#include "saturn/model/model.hpp"
#include "saturn/prover/saturation.hpp"

namespace saturn::orchestrator {

enum class Mode { Baseline, Neural };

struct AttemptConfig {
  Mode mode = Mode::Baseline;
  /// Required in neural mode; shared read-only between attempts.
  const model::Model* model = nullptr;
  std::uint64_t budget = 2000;
  double temperature = 0.0;
  std::uint64_t seed = 0;
  bool shuffle = false;
  std::optional<std::uint64_t> max_generated;
  bool record_trace = false;
};

/// One proof attempt on a parsed problem. Shuffling (by `seed`) happens
/// before SInE levels are computed; the trace header echoes the settings.
prover::SaturationResult run_attempt(const logic::Problem& problem, const AttemptConfig& config);

/// Calls task(i) for i in [0, count) on up to `parallelism` threads. The
/// first exception is rethrown after all threads have joined.
void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& task);

/// splitmix64 step; used to derive independent seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace saturn::orchestrator
