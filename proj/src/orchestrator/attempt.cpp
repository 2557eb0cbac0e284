#include "saturn/orchestrator/attempt.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "saturn/model/evaluator.hpp"

namespace saturn::orchestrator {

prover::SaturationResult run_attempt(const logic::Problem& input, const AttemptConfig& config) {
  logic::Problem problem = config.shuffle ? prover::shuffle_problem(input, config.seed) : input;
  prover::prepare_problem(problem);

  prover::SaturationOptions options;
  options.max_activations = config.budget;
  options.max_generated = config.max_generated;
  options.record_trace = config.record_trace;

  prover::SaturationResult result;
  if (config.mode == Mode::Baseline) {
    prover::BaselinePassive passive;
    result = prover::saturate(problem, passive, options);
  } else {
    if (!config.model) throw std::invalid_argument("neural mode needs a model");
    model::NeuralEvaluator evaluator(*config.model, problem);
    prover::NeuralPassive passive(evaluator, config.temperature, config.seed);
    result = prover::saturate(problem, passive, options);
  }
  if (result.trace) {
    prover::TraceSettings& s = result.trace->settings;
    s.mode = config.mode == Mode::Baseline ? "baseline" : "neural";
    s.seed = config.seed;
    s.temperature = config.temperature;
    s.budget = config.budget;
    s.shuffle = config.shuffle;
  }
  return result;
}

void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& task) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, parallelism), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace saturn::orchestrator
