#include "saturn/orchestrator/loop.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "saturn/orchestrator/attempt.hpp"
#include "saturn/prover/trace.hpp"

namespace saturn::orchestrator {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> boost_temperatures(std::uint32_t runs) {
  static const double kBoost[] = {0.0, 1.0 / 27, 1.0 / 9, 1.0 / 3, 1.0};
  std::vector<double> out;
  for (std::uint32_t r = 0; r < runs; ++r) out.push_back(r < std::size(kBoost) ? kBoost[r] : 1.0);
  return out;
}

void LoopConfig::validate() const {
  if (runs == 0) throw std::invalid_argument("runs per problem must be at least 1");
  if (temperatures.size() != runs) throw std::invalid_argument("need one temperature per run");
  for (double t : temperatures) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("temperatures must be finite and >= 0");
  }
  if (budget == 0) throw std::invalid_argument("activation budget must be positive");
  if (iterations == 0) throw std::invalid_argument("iterations must be at least 1");
  if (workdir.empty()) throw std::invalid_argument("work directory is required");
  hyper.validate();
}

std::set<std::string> IterationRecord::solved() const {
  std::set<std::string> out;
  for (const auto& run : train_runs) {
    for (const auto& [name, r] : run) {
      if (r.outcome == prover::Outcome::Refutation) out.insert(name);
    }
  }
  return out;
}

std::set<std::string> IterationRecord::holdout_solved() const {
  std::set<std::string> out;
  for (const auto& [name, r] : holdout) {
    if (r.outcome == prover::Outcome::Refutation) out.insert(name);
  }
  return out;
}

double IterationRecord::median_activations() const {
  std::vector<double> values;
  if (!train_runs.empty()) {
    for (const auto& [name, r] : train_runs.front()) {
      if (r.outcome == prover::Outcome::Refutation) values.push_back(static_cast<double>(r.activations));
    }
  }
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
}

bool operator==(const IterationRecord& a, const IterationRecord& b) { return record_to_json(a) == record_to_json(b); }

namespace {

json results_to_json(const std::map<std::string, ProblemResult>& results) {
  json out = json::object();
  for (const auto& [name, r] : results) {
    out[name] = {{"outcome", std::string(prover::outcome_name(r.outcome))}, {"activations", r.activations}};
  }
  return out;
}

std::map<std::string, ProblemResult> results_from_json(const json& in) {
  std::map<std::string, ProblemResult> out;
  for (const auto& [name, r] : in.items()) {
    out[name] = ProblemResult{prover::parse_outcome(r.at("outcome").get<std::string>()), r.at("activations").get<std::uint64_t>()};
  }
  return out;
}

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

std::string record_to_json(const IterationRecord& r) {
  json j;
  j["iteration"] = r.iteration;
  j["strategy"] = r.strategy;
  j["train_runs"] = json::array();
  for (const auto& run : r.train_runs) j["train_runs"].push_back(results_to_json(run));
  j["has_holdout"] = r.has_holdout;
  j["holdout"] = results_to_json(r.holdout);
  j["trace_paths"] = r.trace_paths;
  j["model_path"] = r.model_path;
  j["training_traces"] = r.training_traces;
  j["training_problems"] = r.training_problems;
  if (r.training) {
    json t;
    t["best_round"] = r.training->best_round;
    t["train_traces"] = r.training->train_traces;
    t["validation_traces"] = r.training->validation_traces;
    t["learning_rate"] = r.training->learning_rate;
    t["rounds"] = json::array();
    for (const auto& round : r.training->rounds) {
      t["rounds"].push_back({{"round", round.round},
                             {"train_loss", optional_number(round.train_loss)},
                             {"validation_loss", optional_number(round.validation_loss)},
                             {"stopped", round.stopped}});
    }
    j["training"] = t;
  } else {
    j["training"] = nullptr;
  }
  j["scores"] = json::object();
  for (const auto& [name, s] : r.scores) {
    j["scores"][name] = {{"score", s.score}, {"unsolved_streak", s.unsolved_streak}, {"stale", s.stale}};
  }
  j["summary"] = {{"solved", r.solved().size()},
                  {"holdout_solved", r.holdout_solved().size()},
                  {"median_activations", r.median_activations()}};
  return j.dump(1);
}

IterationRecord record_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    IterationRecord r;
    r.iteration = j.at("iteration").get<std::uint32_t>();
    r.strategy = j.at("strategy").get<std::string>();
    for (const auto& run : j.at("train_runs")) r.train_runs.push_back(results_from_json(run));
    r.has_holdout = j.at("has_holdout").get<bool>();
    r.holdout = results_from_json(j.at("holdout"));
    r.trace_paths = j.at("trace_paths").get<std::vector<std::string>>();
    r.model_path = j.at("model_path").get<std::string>();
    r.training_traces = j.at("training_traces").get<std::size_t>();
    r.training_problems = j.at("training_problems").get<std::size_t>();
    if (!j.at("training").is_null()) {
      const json& t = j.at("training");
      trainer::TrainReport report;
      report.best_round = t.at("best_round").get<std::uint32_t>();
      report.train_traces = t.at("train_traces").get<std::size_t>();
      report.validation_traces = t.at("validation_traces").get<std::size_t>();
      report.learning_rate = t.at("learning_rate").get<double>();
      for (const auto& round : t.at("rounds")) {
        trainer::RoundReport row;
        row.round = round.at("round").get<std::uint32_t>();
        row.train_loss = round.at("train_loss").is_null() ? NAN : round.at("train_loss").get<double>();
        if (!round.at("validation_loss").is_null()) row.validation_loss = round.at("validation_loss").get<double>();
        row.stopped = round.at("stopped").get<bool>();
        report.rounds.push_back(row);
      }
      r.training = report;
    }
    for (const auto& [name, s] : j.at("scores").items()) {
      r.scores[name] = trainer::ProblemScore{s.at("score").get<int>(), s.at("unsolved_streak").get<int>(), s.at("stale").get<bool>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed iteration record: ") + e.what());
  }
}

std::string iteration_dir(std::uint32_t iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "iter_%03u", iteration);
  return buf;
}

Loop::Loop(LoopConfig config) : config_(std::move(config)) {
  config_.validate();
  Corpus corpus = load_corpus(config_.corpus_dir);
  for (const std::string& path : corpus.train) train_.push_back({problem_name(path), logic::load_problem(path)});
  for (const std::string& path : corpus.test) test_.push_back({problem_name(path), logic::load_problem(path)});
  for (auto& n : train_) n.problem.name = n.name;
  for (auto& n : test_) n.problem.name = n.name;
}

IterationRecord Loop::run_iteration(std::uint32_t iteration) {
  if (iteration != done_ + 1) throw std::logic_error("iterations must run in order");
  const fs::path root(config_.workdir);
  const fs::path dir = root / iteration_dir(iteration);
  fs::create_directories(dir / "traces");

  IterationRecord record;
  record.iteration = iteration;
  Mode mode = Mode::Neural;
  if (iteration == 1 && !config_.no_imit) {
    record.strategy = "baseline";
    mode = Mode::Baseline;
  } else if (iteration == 1) {
    record.strategy = "random-network";
    model_ = model::init_model(config_.hyper, mix_seed(config_.seed, 0x1417));
  } else {
    record.strategy = "neural";
  }

  auto settings = [&](std::size_t problem, std::uint32_t run, std::uint64_t salt) {
    AttemptConfig a;
    a.mode = mode;
    a.model = mode == Mode::Neural ? &*model_ : nullptr;
    a.budget = config_.budget;
    a.max_generated = config_.max_generated;
    a.temperature = config_.temperatures[run];
    a.shuffle = run > 0;
    a.seed = mix_seed(mix_seed(mix_seed(config_.seed, salt + iteration), problem), run);
    return a;
  };

  // Train split: every (problem, run) pair is an independent task.
  const std::size_t runs = config_.runs;
  std::vector<ProblemResult> results(train_.size() * runs);
  std::vector<std::optional<trainer::TrainableTrace>> usable(train_.size() * runs);
  std::vector<std::string> paths(train_.size() * runs);
  parallel_for(results.size(), config_.parallelism, [&](std::size_t task) {
    const std::size_t i = task / runs;
    const auto run = static_cast<std::uint32_t>(task % runs);
    AttemptConfig a = settings(i, run, 0);
    a.record_trace = true;
    prover::SaturationResult r = run_attempt(train_[i].problem, a);
    results[task] = ProblemResult{r.outcome, r.stats.activations};
    if (r.outcome != prover::Outcome::Refutation) return;
    usable[task] = trainer::make_trainable(*r.trace);
    if (usable[task]) {
      std::string rel = (fs::path(iteration_dir(iteration)) / "traces" / (train_[i].name + ".r" + std::to_string(run) + ".trace")).string();
      prover::save_trace((root / rel).string(), *r.trace);
      paths[task] = rel;
    }
  });

  record.train_runs.assign(runs, {});
  std::set<std::string> solved;
  std::map<std::string, std::vector<trainer::TrainableTrace>> fresh;
  for (std::size_t task = 0; task < results.size(); ++task) {
    const std::string& name = train_[task / runs].name;
    record.train_runs[task % runs][name] = results[task];
    if (results[task].outcome == prover::Outcome::Refutation) solved.insert(name);
    if (usable[task]) {
      fresh[name].push_back(std::move(*usable[task]));
      record.trace_paths.push_back(paths[task]);
    }
  }

  if (!test_.empty()) {
    record.has_holdout = true;
    std::vector<ProblemResult> held(test_.size());
    parallel_for(test_.size(), config_.parallelism, [&](std::size_t i) {
      prover::SaturationResult r = run_attempt(test_[i].problem, settings(i, 0, 0x7E57));
      held[i] = ProblemResult{r.outcome, r.stats.activations};
    });
    for (std::size_t i = 0; i < test_.size(); ++i) record.holdout[test_[i].name] = held[i];
  }

  scores_.update(solved);
  solved_ever_.insert(solved.begin(), solved.end());
  for (auto& [name, traces] : fresh) latest_[name] = std::move(traces);

  std::vector<trainer::TrainableTrace> batch;
  for (auto& [name, traces] : latest_) {
    if (!scores_.trainable(name) || traces.empty()) continue;
    ++record.training_problems;
    for (trainer::TrainableTrace& t : traces) {
      t.weight = scores_.weight(name);
      batch.push_back(t);
    }
  }
  record.training_traces = batch.size();
  if (!model_) model_ = model::init_model(config_.hyper, mix_seed(config_.seed, 0x1417));
  if (!batch.empty()) {
    trainer::TrainConfig train = config_.train;
    train.seed = mix_seed(config_.seed ^ 0x7A11, iteration);
    record.training = trainer::train_iteration(*model_, batch, iteration, train);
    std::ofstream csv(dir / "training.csv");
    trainer::write_report_csv(csv, *record.training);
  }
  record.model_path = (fs::path(iteration_dir(iteration)) / "model.bin").string();
  model::save_model((root / record.model_path).string(), *model_);
  record.scores = scores_.all();

  std::ofstream out(dir / "record.json");
  out << record_to_json(record) << "\n";
  if (!out) throw std::runtime_error("cannot write record in '" + dir.string() + "'");
  done_ = iteration;
  return record;
}

std::vector<IterationRecord> Loop::run() {
  std::vector<IterationRecord> out;
  for (std::uint32_t j = done_ + 1; j <= config_.iterations; ++j) out.push_back(run_iteration(j));
  return out;
}

}  // namespace saturn::orchestrator
