#include "saturn/trainer/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "saturn/numerics/adam.hpp"
#include "saturn/trainer/loss.hpp"
#include "saturn/trainer/schedule.hpp"

namespace saturn::trainer {

EarlyStopping::EarlyStopping(std::uint32_t patience, std::uint32_t max_rounds)
    : patience_(patience), max_rounds_(max_rounds) {
  if (patience == 0 || max_rounds == 0) throw std::invalid_argument("patience and round cap must be positive");
}

bool EarlyStopping::observe(double validation_loss) {
  ++rounds_;
  if (best_round_ == 0 || validation_loss < best_loss_) {
    best_round_ = rounds_;
    best_loss_ = validation_loss;
    return true;
  }
  return false;
}

bool EarlyStopping::should_stop() const {
  return rounds_ >= max_rounds_ || (best_round_ > 0 && rounds_ - best_round_ >= patience_);
}

namespace {

std::vector<numerics::Tensor> snapshot(const model::Model& model) {
  std::vector<numerics::Tensor> out;
  for (const numerics::Parameter* p : model.parameters()) out.push_back(p->value);
  return out;
}

void restore(model::Model& model, const std::vector<numerics::Tensor>& values) {
  std::vector<numerics::Parameter*> params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

class TraceObjective final : public Objective {
 public:
  TraceObjective(std::vector<const TrainableTrace*> train, std::vector<const TrainableTrace*> validation)
      : train_(std::move(train)), validation_(std::move(validation)) {}

  double train_step(model::Model& model) override { return compute_loss(model, train_, true).loss; }

  std::optional<double> validation_loss(model::Model& model) override {
    if (validation_.empty()) return std::nullopt;
    return compute_loss(model, validation_, false).loss;
  }

 private:
  std::vector<const TrainableTrace*> train_;
  std::vector<const TrainableTrace*> validation_;
};

}  // namespace

TrainReport optimize(model::Model& model, Objective& objective, double learning_rate, const TrainConfig& config) {
  TrainReport report;
  report.learning_rate = learning_rate;
  numerics::Adam adam;
  std::vector<numerics::Parameter*> params = model.parameters();
  EarlyStopping stopping(config.patience, config.max_rounds);
  std::vector<numerics::Tensor> best;

  for (std::uint32_t round = 1;; ++round) {
    model.zero_grad();
    RoundReport row;
    row.round = round;
    row.train_loss = objective.train_step(model);
    adam.step(params, learning_rate);
    row.validation_loss = objective.validation_loss(model);

    if (!row.validation_loss) {
      row.stopped = round >= config.fallback_rounds;
      report.rounds.push_back(row);
      if (row.stopped) {
        report.best_round = round;
        break;
      }
      continue;
    }
    double loss = std::isnan(*row.validation_loss) ? INFINITY : *row.validation_loss;
    if (stopping.observe(loss)) best = snapshot(model);
    row.stopped = stopping.should_stop();
    report.rounds.push_back(row);
    if (row.stopped) {
      report.best_round = stopping.best_round();
      restore(model, best);
      break;
    }
  }
  model.zero_grad();
  return report;
}

TrainReport train_iteration(model::Model& model, std::span<const TrainableTrace> traces, std::uint32_t iteration,
                            const TrainConfig& config) {
  std::vector<const TrainableTrace*> usable;
  for (const TrainableTrace& t : traces) {
    if (std::any_of(t.steps.begin(), t.steps.end(), [](const TrainingStep& s) { return !s.good.empty(); })) {
      usable.push_back(&t);
    }
  }
  if (usable.empty()) throw std::invalid_argument("no trace with a usable selection step");

  std::vector<const TrainableTrace*> train, validation;
  if (usable.size() < config.min_traces) {
    train = usable;
  } else {
    std::mt19937_64 rng(config.seed);
    for (std::size_t i = usable.size(); i > 1; --i) std::swap(usable[i - 1], usable[rng() % i]);
    auto held = static_cast<std::size_t>(std::llround(config.validation_fraction * static_cast<double>(usable.size())));
    held = std::clamp<std::size_t>(held, 1, usable.size() - 1);
    validation.assign(usable.begin(), usable.begin() + static_cast<std::ptrdiff_t>(held));
    train.assign(usable.begin() + static_cast<std::ptrdiff_t>(held), usable.end());
  }
  TraceObjective objective(train, validation);
  TrainReport report = optimize(model, objective, learning_rate(iteration, config.base_learning_rate), config);
  report.train_traces = train.size();
  report.validation_traces = validation.size();
  return report;
}

void write_report_csv(std::ostream& out, const TrainReport& report) {
  out << "round,train_loss,validation_loss,stopped\n";
  char buf[64];
  for (const RoundReport& r : report.rounds) {
    out << r.round << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.train_loss);
    out << buf << ',';
    if (r.validation_loss) {
      std::snprintf(buf, sizeof(buf), "%.17g", *r.validation_loss);
      out << buf;
    }
    out << ',' << (r.stopped ? 1 : 0) << '\n';
  }
}

}  // namespace saturn::trainer
