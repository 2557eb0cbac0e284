#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace saturn::orchestrator {

/// Problem files of a corpus directory. A directory with a `train/`
/// subdirectory is split: `train/*.p` and, if present, `test/*.p`.
/// Otherwise every `*.p` directly inside it is a training problem.
struct Corpus {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Paths are sorted. Throws std::runtime_error when no training problem exists.
Corpus load_corpus(const std::string& dir);

/// Problem name of a corpus file: the file name without `.p`.
std::string problem_name(const std::string& path);

struct GeneratedProblem {
  std::string name;
  std::string text;
};

/// Seeded parameterized problems from several families, all unsatisfiable:
/// Horn chains with distractors, conjunctive Horn goals, reachability over
/// random graphs, unary chains through function terms and counting with a
/// successor function.
std::vector<GeneratedProblem> generate_problems(std::size_t count, std::uint64_t seed);

/// Writes `count` generated problems, `holdout` of them (seeded choice) to
/// `dir/test` and the rest to `dir/train`.
void write_generated_corpus(const std::string& dir, std::size_t count, std::size_t holdout, std::uint64_t seed);

}  // namespace saturn::orchestrator
