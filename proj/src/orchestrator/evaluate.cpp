#include "saturn/orchestrator/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "saturn/orchestrator/attempt.hpp"
#include "saturn/orchestrator/corpus.hpp"
#include "saturn/orchestrator/loop.hpp"

namespace saturn::orchestrator {

namespace fs = std::filesystem;

std::vector<EvalRow> evaluate(const model::Model* model, const std::vector<std::string>& paths, std::uint64_t budget,
                              unsigned parallelism, std::optional<std::uint64_t> max_generated) {
  std::vector<EvalRow> rows(paths.size());
  parallel_for(paths.size(), parallelism, [&](std::size_t i) {
    logic::Problem problem = logic::load_problem(paths[i]);
    problem.name = problem_name(paths[i]);
    AttemptConfig a;
    a.mode = model ? Mode::Neural : Mode::Baseline;
    a.model = model;
    a.budget = budget;
    a.max_generated = max_generated;
    prover::SaturationResult r = run_attempt(problem, a);
    rows[i].problem = problem.name;
    rows[i].outcome = r.outcome;
    rows[i].activations = r.outcome == prover::Outcome::ResourceOut ? budget : r.stats.activations;
  });
  return rows;
}

void write_eval_csv(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << "problem,outcome,activations\n";
  for (const EvalRow& r : rows) out << r.problem << ',' << prover::outcome_name(r.outcome) << ',' << r.activations << '\n';
}

std::vector<EvalRow> read_eval_csv(std::istream& in) {
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != "problem,outcome,activations") throw std::runtime_error("line 1: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    auto a = line.find(','), b = line.rfind(',');
    if (a == std::string::npos || a == b) throw std::runtime_error("line " + std::to_string(number) + ": expected 3 fields");
    EvalRow row;
    row.problem = line.substr(0, a);
    try {
      row.outcome = prover::parse_outcome(line.substr(a + 1, b - a - 1));
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(number) + ": unknown outcome");
    }
    const char* first = line.data() + b + 1;
    const char* last = line.data() + line.size();
    auto [end, ec] = std::from_chars(first, last, row.activations);
    if (ec != std::errc() || end != last) throw std::runtime_error("line " + std::to_string(number) + ": bad activation count");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ActivationComparison> compare_activations(const std::vector<EvalRow>& baseline, const std::vector<EvalRow>& other) {
  std::map<std::string, std::uint64_t> solved;
  for (const EvalRow& r : other) {
    if (r.outcome == prover::Outcome::Refutation) solved[r.problem] = r.activations;
  }
  std::vector<ActivationComparison> out;
  for (const EvalRow& r : baseline) {
    auto it = solved.find(r.problem);
    if (r.outcome == prover::Outcome::Refutation && it != solved.end()) out.push_back({r.problem, r.activations, it->second});
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

std::string number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct Loaded {
  std::vector<IterationRecord> records;
  std::vector<std::string> errors;
};

Loaded load_records(const std::string& workdir) {
  Loaded out;
  if (!fs::is_directory(workdir)) {
    out.errors.push_back(workdir + ": not a directory");
    return out;
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(workdir)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("iter_", 0) == 0) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    fs::path file = dir / "record.json";
    try {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot open");
      std::stringstream text;
      text << in.rdbuf();
      out.records.push_back(record_from_json(text.str()));
    } catch (const std::exception& e) {
      out.errors.push_back(file.string() + ": " + e.what());
    }
  }
  return out;
}

/// Run-0 activations of solved train problems.
std::map<std::string, std::uint64_t> solved_activations(const IterationRecord& r) {
  std::map<std::string, std::uint64_t> out;
  if (r.train_runs.empty()) return out;
  for (const auto& [name, result] : r.train_runs.front()) {
    if (result.outcome == prover::Outcome::Refutation) out[name] = result.activations;
  }
  return out;
}

}  // namespace

ReportResult write_report(const std::string& workdir, std::ostream& summary) {
  Loaded loaded = load_records(workdir);
  bool holdout = std::any_of(loaded.records.begin(), loaded.records.end(), [](const IterationRecord& r) { return r.has_holdout; });
  summary << "iteration,strategy,train_solved" << (holdout ? ",holdout_solved" : "")
          << ",training_traces,median_activations,common_with_first,median_first_on_common,median_this_on_common,"
             "best_round,rounds,best_train_loss,best_validation_loss\n";
  std::map<std::string, std::uint64_t> first;
  if (!loaded.records.empty()) first = solved_activations(loaded.records.front());
  for (const IterationRecord& r : loaded.records) {
    std::vector<double> a, b;
    for (const auto& [name, acts] : solved_activations(r)) {
      auto it = first.find(name);
      if (it == first.end()) continue;
      a.push_back(static_cast<double>(it->second));
      b.push_back(static_cast<double>(acts));
    }
    summary << r.iteration << ',' << r.strategy << ',' << r.solved().size();
    if (holdout) summary << ',' << (r.has_holdout ? std::to_string(r.holdout_solved().size()) : "");
    summary << ',' << r.training_traces << ',' << number(r.median_activations()) << ',' << a.size() << ',' << number(median(a))
            << ',' << number(median(b)) << ',';
    if (r.training && r.training->best_round > 0 && r.training->best_round <= r.training->rounds.size()) {
      const trainer::RoundReport& best = r.training->rounds[r.training->best_round - 1];
      summary << r.training->best_round << ',' << r.training->rounds.size() << ',' << number(best.train_loss) << ','
              << (best.validation_loss ? number(*best.validation_loss) : "");
    } else {
      summary << ",0,,";
    }
    summary << '\n';
  }
  return ReportResult{loaded.records.size(), loaded.errors};
}

ReportResult write_loss_curves(const std::string& workdir, std::ostream& out) {
  Loaded loaded = load_records(workdir);
  out << "iteration,round,train_loss,validation_loss,stopped\n";
  for (const IterationRecord& r : loaded.records) {
    if (!r.training) continue;
    for (const trainer::RoundReport& row : r.training->rounds) {
      out << r.iteration << ',' << row.round << ',' << number(row.train_loss) << ','
          << (row.validation_loss ? number(*row.validation_loss) : "") << ',' << (row.stopped ? 1 : 0) << '\n';
    }
  }
  return ReportResult{loaded.records.size(), loaded.errors};
}

}  // namespace saturn::orchestrator
