#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saturn/model/model.hpp"
#include "saturn/prover/trace.hpp"

namespace saturn::orchestrator {

struct EvalRow {
  std::string problem;
  prover::Outcome outcome = prover::Outcome::ResourceOut;
  /// The full budget for ResourceOut.
  std::uint64_t activations = 0;
};

/// Deterministic (tau = 0, input order) runs over problem files. A null
/// model selects baseline mode. Rows follow the order of `paths`.
std::vector<EvalRow> evaluate(const model::Model* model, const std::vector<std::string>& paths, std::uint64_t budget,
                              unsigned parallelism = 1, std::optional<std::uint64_t> max_generated = std::nullopt);

/// CSV with header problem,outcome,activations.
void write_eval_csv(std::ostream& out, const std::vector<EvalRow>& rows);
/// Throws std::runtime_error naming the line on malformed input.
std::vector<EvalRow> read_eval_csv(std::istream& in);

/// Per-problem activation ratios (baseline / other) on commonly solved problems.
struct ActivationComparison {
  std::string problem;
  std::uint64_t baseline = 0;
  std::uint64_t other = 0;
};
std::vector<ActivationComparison> compare_activations(const std::vector<EvalRow>& baseline, const std::vector<EvalRow>& other);

/// Summary of a work directory, one row per readable iteration record:
///   iteration,strategy,train_solved[,holdout_solved],training_traces,
///   median_activations,common_with_first,median_first_on_common,
///   median_this_on_common,best_round,rounds,best_train_loss,best_validation_loss
/// The holdout column appears when any record has a holdout split.
/// Returns the unreadable record files with their errors.
struct ReportResult {
  std::size_t rows = 0;
  std::vector<std::string> errors;
};
ReportResult write_report(const std::string& workdir, std::ostream& summary);
/// Loss curves: iteration,round,train_loss,validation_loss,stopped.
ReportResult write_loss_curves(const std::string& workdir, std::ostream& out);

}  // namespace saturn::orchestrator
