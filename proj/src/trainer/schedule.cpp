#include "saturn/trainer/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace saturn::trainer {

double learning_rate(std::uint32_t iteration, double base) {
  if (iteration == 0) throw std::invalid_argument("iterations are numbered from 1");
  return base * std::pow(kLearningRateDecay, static_cast<double>(iteration - 1));
}

double ProblemScores::base() { return std::pow(kMaxStrength, 1.0 / (2.0 * kStaleAfter)); }

void ProblemScores::update(const std::set<std::string>& solved) {
  for (const std::string& id : solved) scores_.try_emplace(id);
  for (auto& [id, s] : scores_) {
    if (s.stale) continue;
    if (solved.count(id)) {
      s.score -= 1;
      s.unsolved_streak = 0;
    } else {
      s.score += 2;
      if (++s.unsolved_streak >= kStaleAfter) s.stale = true;
    }
  }
}

bool ProblemScores::trainable(const std::string& problem) const {
  auto it = scores_.find(problem);
  return it != scores_.end() && !it->second.stale;
}

double ProblemScores::weight(const std::string& problem) const { return std::pow(base(), scores_.at(problem).score); }

}  // namespace saturn::trainer
