#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saturn/model/model.hpp"
#include "saturn/trainer/trainable.hpp"

namespace saturn::trainer {

/// Validation patience: rounds without improvement before stopping.
class EarlyStopping {
 public:
  EarlyStopping(std::uint32_t patience, std::uint32_t max_rounds);

  /// Records the validation loss of the next round (numbered from 1).
  /// Returns true when it is a new strict best.
  bool observe(double validation_loss);
  bool should_stop() const;

  std::uint32_t rounds() const { return rounds_; }
  std::uint32_t best_round() const { return best_round_; }
  double best_loss() const { return best_loss_; }

 private:
  std::uint32_t patience_;
  std::uint32_t max_rounds_;
  std::uint32_t rounds_ = 0;
  std::uint32_t best_round_ = 0;
  double best_loss_ = 0.0;
};

/// What the optimizer loop needs from a training problem.
class Objective {
 public:
  virtual ~Objective() = default;
  /// Adds the training-loss gradient to the (zeroed) grads and returns the loss.
  virtual double train_step(model::Model& model) = 0;
  /// Loss on held-out data; nullopt when there is none.
  virtual std::optional<double> validation_loss(model::Model& model) = 0;
};

struct TrainConfig {
  std::uint32_t patience = 5;
  std::uint32_t max_rounds = 200;
  /// With fewer usable traces, train on all of them for fallback_rounds.
  std::size_t min_traces = 5;
  std::uint32_t fallback_rounds = 20;
  double validation_fraction = 0.2;
  double base_learning_rate = 0.0002;
  std::uint64_t seed = 0;
};

struct RoundReport {
  std::uint32_t round = 0;
  double train_loss = 0.0;
  std::optional<double> validation_loss;
  bool stopped = false;
};

struct TrainReport {
  std::vector<RoundReport> rounds;
  /// Round whose parameters were returned.
  std::uint32_t best_round = 0;
  std::size_t train_traces = 0;
  std::size_t validation_traces = 0;
  double learning_rate = 0.0;
};

/// Full-batch Adam rounds at a fixed learning rate. With validation data the
/// loop stops once the validation loss has not improved for `patience`
/// rounds (or at max_rounds) and the model is reset to the best round's
/// parameters; without it, it runs fallback_rounds and keeps the last ones.
TrainReport optimize(model::Model& model, Objective& objective, double learning_rate, const TrainConfig& config);

/// Seeded 80/20 split of `traces` and optimize() at learning_rate(iteration).
TrainReport train_iteration(model::Model& model, std::span<const TrainableTrace> traces, std::uint32_t iteration,
                            const TrainConfig& config);

/// CSV with header round,train_loss,validation_loss,stopped.
void write_report_csv(std::ostream& out, const TrainReport& report);

}  // namespace saturn::trainer
