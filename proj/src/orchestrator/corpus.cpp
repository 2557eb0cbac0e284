#include "saturn/orchestrator/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace saturn::orchestrator {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> problem_files(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".p") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Accumulates cnf lines; `ax` and `goal` take a bare disjunction.
class Builder {
 public:
  void ax(const std::string& formula) { lines_.push_back("cnf(a" + std::to_string(lines_.size()) + ", axiom, " + formula + ")."); }
  void goal(const std::string& formula) {
    lines_.push_back("cnf(g" + std::to_string(lines_.size()) + ", negated_conjecture, " + formula + ").");
  }
  /// Seeded order so that input position carries no hint.
  std::string text(std::mt19937_64& rng) {
    for (std::size_t i = lines_.size(); i > 1; --i) std::swap(lines_[i - 1], lines_[rng() % i]);
    std::string out;
    for (const std::string& l : lines_) out += l + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

std::string nat(const std::string& zero, std::size_t k) {
  std::string t = zero;
  for (std::size_t i = 0; i < k; ++i) t = "s(" + t + ")";
  return t;
}

/// a0 -> a1 -> ... -> aL with irrelevant atoms b* that the chain feeds.
std::string horn_chain(std::mt19937_64& rng, std::size_t d) {
  Builder b;
  const std::size_t length = 4 + d + pick(rng, 3);
  const std::size_t noise = 3 + 2 * d;
  auto a = [](std::size_t i) { return "a" + std::to_string(i); };
  auto x = [](std::size_t i) { return "b" + std::to_string(i); };
  b.ax(a(0));
  for (std::size_t i = 0; i < length; ++i) b.ax("~" + a(i) + " | " + a(i + 1));
  b.goal("~" + a(length));
  for (std::size_t i = 0; i < noise; ++i) {
    std::string from = pick(rng, 2) ? a(pick(rng, length)) : x(pick(rng, noise));
    switch (pick(rng, 3)) {
      case 0: b.ax("~" + from + " | " + x(pick(rng, noise))); break;
      case 1: b.ax("~" + from + " | ~" + x(pick(rng, noise)) + " | " + x(pick(rng, noise))); break;
      default: b.ax(x(pick(rng, noise))); break;
    }
  }
  return b.text(rng);
}

/// Goal g needs every leaf of a binary and-tree; some leaves come from side chains.
std::string horn_and(std::mt19937_64& rng, std::size_t d) {
  Builder b;
  const std::size_t depth = 2 + d / 2;
  std::size_t next = 1;
  std::vector<std::size_t> frontier{0};
  auto v = [](std::size_t i) { return "n" + std::to_string(i); };
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<std::size_t> children;
    for (std::size_t node : frontier) {
      std::size_t l = next++, r = next++;
      b.ax("~" + v(l) + " | ~" + v(r) + " | " + v(node));
      children.push_back(l);
      children.push_back(r);
    }
    frontier = children;
  }
  for (std::size_t leaf : frontier) {
    if (pick(rng, 3) == 0) {
      std::size_t side = next++;
      b.ax(v(side));
      b.ax("~" + v(side) + " | " + v(leaf));
    } else {
      b.ax(v(leaf));
    }
  }
  const std::size_t total = next;
  for (std::size_t i = 0; i < 2 + 2 * d; ++i) {
    std::size_t extra = next++;
    b.ax("~" + v(pick(rng, total)) + " | " + v(extra));
    if (pick(rng, 2)) b.ax("~" + v(extra) + " | ~" + v(pick(rng, total)) + " | " + v(next++));
  }
  b.goal("~" + v(0));
  return b.text(rng);
}

/// path over a random graph that contains a route from the source to the target.
std::string reach(std::mt19937_64& rng, std::size_t d) {
  Builder b;
  const std::size_t nodes = 3 + d;
  std::vector<std::size_t> label(nodes + 2);
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = i;
  for (std::size_t i = label.size(); i > 1; --i) std::swap(label[i - 1], label[pick(rng, i)]);
  auto c = [&](std::size_t i) { return "c" + std::to_string(label[i]); };
  for (std::size_t i = 0; i + 1 < nodes; ++i) b.ax("edge(" + c(i) + "," + c(i + 1) + ")");
  for (std::size_t i = 0; i < d + 1; ++i) {
    // Extra edges never lead back into the route's target.
    b.ax("edge(" + c(pick(rng, nodes + 2)) + "," + c(nodes + pick(rng, 2)) + ")");
  }
  b.ax("~edge(X,Y) | path(X,Y)");
  b.ax("~edge(X,Y) | ~path(Y,Z) | path(X,Z)");
  b.goal("~path(" + c(0) + "," + c(nodes - 1) + ")");
  return b.text(rng);
}

/// p0(a) and p_i(X) -> p_{i+1}(f_i(X)); side predicates grow terms without end.
std::string unary_chain(std::mt19937_64& rng, std::size_t d) {
  Builder b;
  const std::size_t length = 3 + d;
  auto p = [](std::size_t i) { return "p" + std::to_string(i); };
  b.ax(p(0) + "(a)");
  std::string target = "a";
  for (std::size_t i = 0; i < length; ++i) {
    std::string f = "f" + std::to_string(i % 2);
    b.ax("~" + p(i) + "(X) | " + p(i + 1) + "(" + f + "(X))");
    target = f + "(" + target + ")";
  }
  b.goal("~" + p(length) + "(" + target + ")");
  for (std::size_t i = 0; i < 1 + d / 2; ++i) {
    std::string q = "q" + std::to_string(i);
    b.ax("~" + p(pick(rng, length)) + "(X) | " + q + "(g(X))");
    b.ax("~" + q + "(X) | " + q + "(h(X))");
  }
  return b.text(rng);
}

/// even(0) and even(X) -> even(s(s(X))), with an odd counterpart as noise.
std::string counting(std::mt19937_64& rng, std::size_t d) {
  Builder b;
  const std::size_t k = 2 + d + pick(rng, 2);
  b.ax("even(z)");
  b.ax("~even(X) | even(s(s(X)))");
  b.ax("odd(s(z))");
  b.ax("~odd(X) | odd(s(s(X)))");
  if (pick(rng, 2)) b.ax("~even(X) | odd(s(X))");
  if (d > 2) b.ax("~odd(X) | ~even(X) | bad(X)");
  b.goal("~even(" + nat("z", 2 * k) + ")");
  return b.text(rng);
}

}  // namespace

std::string problem_name(const std::string& path) { return fs::path(path).stem().string(); }

Corpus load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory '" + dir + "' does not exist");
  Corpus corpus;
  if (fs::is_directory(fs::path(dir) / "train")) {
    corpus.train = problem_files(fs::path(dir) / "train");
    corpus.test = problem_files(fs::path(dir) / "test");
  } else {
    corpus.train = problem_files(dir);
  }
  if (corpus.train.empty()) throw std::runtime_error("corpus '" + dir + "' has no training problems");
  return corpus;
}

std::vector<GeneratedProblem> generate_problems(std::size_t count, std::uint64_t seed) {
  using Family = std::string (*)(std::mt19937_64&, std::size_t);
  const std::pair<const char*, Family> families[] = {
      {"horn_chain", horn_chain}, {"horn_and", horn_and}, {"reach", reach}, {"unary_chain", unary_chain}, {"counting", counting}};
  constexpr std::size_t kFamilies = std::size(families);
  std::vector<GeneratedProblem> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& [family, make] = families[i % kFamilies];
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i);
    std::size_t difficulty = (i / kFamilies) % 6;
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03zu", family, i);
    out.push_back({name, make(rng, difficulty)});
  }
  return out;
}

void write_generated_corpus(const std::string& dir, std::size_t count, std::size_t holdout, std::uint64_t seed) {
  if (holdout > count) throw std::invalid_argument("holdout larger than the corpus");
  std::vector<GeneratedProblem> problems = generate_problems(count, seed);
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::mt19937_64 rng(seed ^ 0x5DEECE66Dull);
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  for (const char* split : {"train", "test"}) fs::create_directories(fs::path(dir) / split);
  for (std::size_t k = 0; k < count; ++k) {
    const GeneratedProblem& p = problems[order[k]];
    fs::path path = fs::path(dir) / (k < holdout ? "test" : "train") / (p.name + ".p");
    std::ofstream out(path);
    out << p.text;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

}  // namespace saturn::orchestrator
