// saturn: command-line front end for proving, training, the improvement
// loop, evaluation and reporting. Exit codes: 0 success, 1 usage error,
// 2 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "saturn/logic/problem.hpp"
#include "saturn/model/model.hpp"
#include "saturn/orchestrator/attempt.hpp"
#include "saturn/orchestrator/corpus.hpp"
#include "saturn/orchestrator/evaluate.hpp"
#include "saturn/orchestrator/loop.hpp"
#include "saturn/trainer/trainable.hpp"
#include "saturn/trainer/training.hpp"

namespace fs = std::filesystem;
using namespace saturn;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string szs_status(prover::Outcome outcome) {
  switch (outcome) {
    case prover::Outcome::Refutation: return "Unsatisfiable";
    case prover::Outcome::Saturated: return "Satisfiable";
    case prover::Outcome::ResourceOut: return "ResourceOut";
  }
  return "Unknown";
}

void add_hyper_options(CLI::App* app, model::HyperParams& hp) {
  app->add_option("--dim", hp.n, "Embedding size n")->capture_default_str();
  app->add_option("--hidden", hp.m, "MLP hidden size m")->capture_default_str();
  app->add_option("--gnn-rounds", hp.k, "Message-passing rounds k")->capture_default_str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturation prover with learned clause selection"};
  app.require_subcommand(1);

  // prove
  std::string input, mode = "baseline", model_path, trace_out;
  orchestrator::AttemptConfig attempt;
  std::uint64_t max_generated = 0;
  auto* prove = app.add_subcommand("prove", "Run one proof attempt");
  prove->add_option("--input", input, "TPTP CNF problem")->required()->check(CLI::ExistingFile);
  prove->add_option("--mode", mode, "Clause selection")->check(CLI::IsMember({"baseline", "neural"}))->capture_default_str();
  prove->add_option("--model", model_path, "Model file for neural mode");
  prove->add_option("--budget", attempt.budget, "Activation budget")->capture_default_str();
  prove->add_option("--temperature", attempt.temperature, "Gumbel noise temperature")->capture_default_str();
  prove->add_option("--seed", attempt.seed, "Seed for noise and shuffling")->capture_default_str();
  prove->add_flag("--shuffle", attempt.shuffle, "Shuffle clause and literal order");
  prove->add_option("--trace-out", trace_out, "Write the trace here");
  prove->add_option("--max-generated", max_generated, "Stop after this many conclusions (0 = no cap)");

  // train
  std::string traces_dir, model_in, model_out;
  std::uint32_t iteration = 1;
  trainer::TrainConfig train_config;
  auto* train = app.add_subcommand("train", "Train a model on a directory of traces");
  train->add_option("--traces", traces_dir, "Directory of .trace files")->required()->check(CLI::ExistingDirectory);
  train->add_option("--model-in", model_in, "Starting model")->required()->check(CLI::ExistingFile);
  train->add_option("--model-out", model_out, "Trained model")->required();
  train->add_option("--iteration", iteration, "Loop iteration (learning-rate schedule)")->capture_default_str();
  train->add_option("--seed", train_config.seed, "Split seed")->capture_default_str();
  train->add_option("--base-lr", train_config.base_learning_rate, "Learning rate of iteration 1")->capture_default_str();
  std::string report_out;
  train->add_option("--report-out", report_out, "Per-round CSV report");

  // init-model
  model::HyperParams init_hyper;
  std::uint64_t init_seed = 0;
  std::string init_out;
  auto* init = app.add_subcommand("init-model", "Write a freshly initialized model");
  init->add_option("--out", init_out, "Model file")->required();
  init->add_option("--seed", init_seed, "Initialization seed")->capture_default_str();
  add_hyper_options(init, init_hyper);

  // loop
  orchestrator::LoopConfig loop_config;
  std::vector<double> temperatures;
  std::uint64_t loop_max_generated = *loop_config.max_generated;
  auto* loop = app.add_subcommand("loop", "Run the improvement loop");
  loop->add_option("--corpus", loop_config.corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  loop->add_option("--iterations", loop_config.iterations, "Iterations")->required();
  loop->add_option("--workdir", loop_config.workdir, "Work directory")->required();
  loop->add_option("--runs", loop_config.runs, "Runs per problem")->capture_default_str();
  loop->add_option("--temperatures", temperatures, "One temperature per run (default: boost schedule)");
  loop->add_option("--parallelism", loop_config.parallelism, "Concurrent proof attempts")->capture_default_str();
  loop->add_flag("--no-imit", loop_config.no_imit, "Seed iteration 1 with a random network");
  loop->add_option("--seed", loop_config.seed, "Master seed")->capture_default_str();
  loop->add_option("--budget", loop_config.budget, "Activation budget")->capture_default_str();
  loop->add_option("--max-generated", loop_max_generated, "Conclusion cap per attempt (0 = no cap)")->capture_default_str();
  loop->add_option("--base-lr", loop_config.train.base_learning_rate, "Learning rate of iteration 1")->capture_default_str();
  loop->add_option("--max-rounds", loop_config.train.max_rounds, "Training round cap per iteration")->capture_default_str();
  add_hyper_options(loop, loop_config.hyper);

  // eval
  std::string eval_corpus, eval_model, csv_out, split = "all";
  std::uint64_t eval_budget = 2000;
  unsigned eval_parallelism = 1;
  auto* eval = app.add_subcommand("eval", "Deterministic evaluation over a corpus");
  eval->add_option("--corpus", eval_corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--model", eval_model, "Model file (omit for the baseline)");
  eval->add_option("--budget", eval_budget, "Activation budget")->capture_default_str();
  eval->add_option("--csv-out", csv_out, "Output CSV")->required();
  eval->add_option("--split", split, "Problems to run")->check(CLI::IsMember({"train", "test", "all"}))->capture_default_str();
  eval->add_option("--parallelism", eval_parallelism, "Concurrent proof attempts")->capture_default_str();

  // report
  std::string report_workdir, report_csv, losses_csv;
  auto* report = app.add_subcommand("report", "Summarize a loop work directory");
  report->add_option("--workdir", report_workdir, "Work directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--csv-out", report_csv, "Summary CSV")->required();
  report->add_option("--losses-out", losses_csv, "Loss curve CSV");

  // gen-corpus
  std::string gen_out;
  std::size_t gen_count = 200, gen_holdout = 40;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-corpus", "Write a generated train/test corpus");
  gen->add_option("--out", gen_out, "Corpus directory")->required();
  gen->add_option("--count", gen_count, "Problems")->capture_default_str();
  gen->add_option("--holdout", gen_holdout, "Problems placed in test/")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*prove) {
      if (mode == "neural" && model_path.empty()) throw UsageError("--mode neural needs --model");
      logic::Problem problem = logic::load_problem(input);
      if (problem.name.empty()) problem.name = orchestrator::problem_name(input);
      std::optional<model::Model> model;
      if (mode == "neural") {
        model = model::load_model(model_path);
        attempt.mode = orchestrator::Mode::Neural;
        attempt.model = &*model;
      }
      if (max_generated > 0) attempt.max_generated = max_generated;
      attempt.record_trace = !trace_out.empty();
      prover::SaturationResult r = orchestrator::run_attempt(problem, attempt);
      std::cout << "% SZS status " << szs_status(r.outcome) << " for " << problem.name << "\n"
                << "% activations " << r.stats.activations << " generated " << r.stats.generated << " subsumed "
                << r.stats.subsumed << "\n";
      if (r.outcome == prover::Outcome::Refutation) std::cout << "% proof clauses " << r.proof.size() << "\n";
      if (!trace_out.empty()) prover::save_trace(trace_out, *r.trace);
    } else if (*train) {
      std::vector<trainer::TrainableTrace> traces;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(traces_dir)) {
        if (entry.path().extension() == ".trace") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& f : files) {
        std::string why;
        if (auto t = trainer::make_trainable(prover::load_trace(f.string()), &why)) {
          traces.push_back(std::move(*t));
        } else {
          std::cerr << "skipping " << f.string() << ": " << why << "\n";
        }
      }
      if (traces.empty()) throw UsageError("no usable traces in '" + traces_dir + "'");
      model::Model model = model::load_model(model_in);
      trainer::TrainReport rep = trainer::train_iteration(model, traces, iteration, train_config);
      model::save_model(model_out, model);
      std::cout << "trained on " << rep.train_traces << " traces (" << rep.validation_traces << " held out), "
                << rep.rounds.size() << " rounds, best round " << rep.best_round << "\n";
      if (!report_out.empty()) {
        auto out = open_out(report_out);
        trainer::write_report_csv(out, rep);
      }
    } else if (*init) {
      model::save_model(init_out, model::init_model(init_hyper, init_seed));
    } else if (*loop) {
      loop_config.max_generated = loop_max_generated > 0 ? std::optional<std::uint64_t>(loop_max_generated) : std::nullopt;
      loop_config.temperatures = temperatures.empty() ? orchestrator::boost_temperatures(loop_config.runs) : temperatures;
      try {
        loop_config.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      orchestrator::Loop runner(loop_config);
      for (std::uint32_t j = 1; j <= loop_config.iterations; ++j) {
        orchestrator::IterationRecord r = runner.run_iteration(j);
        std::cout << "iteration " << j << " (" << r.strategy << "): solved " << r.solved().size();
        if (r.has_holdout) std::cout << ", holdout " << r.holdout_solved().size();
        std::cout << ", median activations " << r.median_activations() << ", trained on " << r.training_traces
                  << " traces" << std::endl;
      }
    } else if (*eval) {
      orchestrator::Corpus corpus = orchestrator::load_corpus(eval_corpus);
      std::vector<std::string> paths;
      if (split != "test") paths = corpus.train;
      if (split != "train") paths.insert(paths.end(), corpus.test.begin(), corpus.test.end());
      std::optional<model::Model> model;
      if (!eval_model.empty()) model = model::load_model(eval_model);
      auto rows = orchestrator::evaluate(model ? &*model : nullptr, paths, eval_budget, eval_parallelism);
      auto out = open_out(csv_out);
      orchestrator::write_eval_csv(out, rows);
    } else if (*report) {
      auto out = open_out(report_csv);
      orchestrator::ReportResult result = orchestrator::write_report(report_workdir, out);
      if (!losses_csv.empty()) {
        auto losses = open_out(losses_csv);
        orchestrator::write_loss_curves(report_workdir, losses);
      }
      for (const std::string& e : result.errors) std::cerr << "error: " << e << "\n";
      if (!result.errors.empty()) return 2;
    } else if (*gen) {
      orchestrator::write_generated_corpus(gen_out, gen_count, gen_holdout, gen_seed);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
