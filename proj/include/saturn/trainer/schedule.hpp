#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace saturn::trainer {

inline constexpr double kBaseLearningRate = 0.0002;
inline constexpr double kLearningRateDecay = 0.87055;

/// alpha_j = base * 0.87055^(j-1); throws std::invalid_argument for j = 0.
double learning_rate(std::uint32_t iteration, double base = kBaseLearningRate);

inline constexpr double kMaxStrength = 2.0;
inline constexpr int kStaleAfter = 5;

struct ProblemScore {
  int score = 0;
  /// Consecutive iterations without a solution.
  int unsolved_streak = 0;
  bool stale = false;

  friend bool operator==(const ProblemScore&, const ProblemScore&) = default;
};

/// Adaptive problem weights. A problem enters at score 0 when first solved;
/// afterwards every iteration subtracts 1 if it was solved and adds 2 if it
/// was not. kStaleAfter unsolved iterations in a row make it stale for good.
class ProblemScores {
 public:
  static double base();

  void update(const std::set<std::string>& solved);

  bool known(const std::string& problem) const { return scores_.count(problem) > 0; }
  /// Known and not stale.
  bool trainable(const std::string& problem) const;
  /// base^score; throws std::out_of_range for an unknown problem.
  double weight(const std::string& problem) const;
  const ProblemScore& at(const std::string& problem) const { return scores_.at(problem); }
  const std::map<std::string, ProblemScore>& all() const { return scores_; }
  void set(const std::string& problem, ProblemScore score) { scores_[problem] = score; }

 private:
  std::map<std::string, ProblemScore> scores_;
};

}  // namespace saturn::trainer
