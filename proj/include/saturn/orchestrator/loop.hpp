#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "saturn/logic/problem.hpp"
#include "saturn/model/model.hpp"
#include "saturn/orchestrator/corpus.hpp"
#include "saturn/trainer/schedule.hpp"
#include "saturn/trainer/trainable.hpp"
#include "saturn/trainer/training.hpp"

namespace saturn::orchestrator {

/// Temperatures of the boost-style diversification, by run index.
std::vector<double> boost_temperatures(std::uint32_t runs);

struct LoopConfig {
  std::string corpus_dir;
  std::string workdir;
  std::uint32_t iterations = 1;
  std::uint64_t budget = 2000;
  /// Runs per problem; run 0 keeps the input order, later runs shuffle it.
  std::uint32_t runs = 1;
  /// One Gumbel temperature per run, used in neural mode.
  std::vector<double> temperatures{0.0};
  unsigned parallelism = 1;
  /// Seed iteration 1 with a fresh random network instead of the baseline.
  bool no_imit = false;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_generated = 20000;
  model::HyperParams hyper;
  trainer::TrainConfig train;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Outcome of one problem under one strategy.
struct ProblemResult {
  prover::Outcome outcome = prover::Outcome::ResourceOut;
  std::uint64_t activations = 0;
};

/// Everything one loop iteration did. Paths are relative to the work
/// directory, so records of identical runs compare equal.
struct IterationRecord {
  std::uint32_t iteration = 0;
  /// "baseline", "random-network" or "neural".
  std::string strategy;
  /// Train split, per run: problem -> result.
  std::vector<std::map<std::string, ProblemResult>> train_runs;
  /// Holdout split, run 0 settings only.
  std::map<std::string, ProblemResult> holdout;
  bool has_holdout = false;
  std::vector<std::string> trace_paths;
  /// Model trained in this iteration (guides the next one).
  std::string model_path;
  std::size_t training_traces = 0;
  std::size_t training_problems = 0;
  std::optional<trainer::TrainReport> training;
  std::map<std::string, trainer::ProblemScore> scores;

  /// Train problems solved by any run.
  std::set<std::string> solved() const;
  std::set<std::string> holdout_solved() const;
  /// Median activations of run 0 over its solved train problems (0 if none).
  double median_activations() const;

  friend bool operator==(const IterationRecord&, const IterationRecord&);
};

std::string record_to_json(const IterationRecord& record);
/// Throws std::runtime_error on malformed input.
IterationRecord record_from_json(const std::string& text);

/// The improvement loop over a corpus. Each iteration proves every train
/// problem `runs` times (and the holdout once) with the current strategy,
/// keeps the traces of successful attempts, updates problem scores and
/// trains the next network on the latest traces of every problem that was
/// ever solved and is not stale.
class Loop {
 public:
  explicit Loop(LoopConfig config);

  /// Runs iteration `iteration` (numbered from 1, in order) and writes its
  /// record, traces and model under the work directory.
  IterationRecord run_iteration(std::uint32_t iteration);
  /// Runs all configured iterations.
  std::vector<IterationRecord> run();

  const trainer::ProblemScores& scores() const { return scores_; }
  const std::set<std::string>& solved_ever() const { return solved_ever_; }

 private:
  struct Named {
    std::string name;
    logic::Problem problem;
  };

  LoopConfig config_;
  std::vector<Named> train_;
  std::vector<Named> test_;
  std::optional<model::Model> model_;
  std::uint32_t done_ = 0;
  trainer::ProblemScores scores_;
  std::set<std::string> solved_ever_;
  std::map<std::string, std::vector<trainer::TrainableTrace>> latest_;
};

/// Directory of an iteration inside the work directory, e.g. "iter_003".
std::string iteration_dir(std::uint32_t iteration);

}  // namespace saturn::orchestrator
