#include "pcalc/corpus.hpp"

#include <limits>

#include "pcalc/error.hpp"

namespace pcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Interval kReal{-kInf, kInf, false, false};
const Interval kPositive{0.0, kInf, false, false};
const Interval kNonNegative{0.0, kInf, true, false};

CorpusEntry smooth(std::string name, const char* f, const char* fprime, Interval domain = kReal) {
  return {std::move(name), parse(f), parse(fprime), domain, true};
}

}  // namespace

const std::vector<CorpusEntry>& corpus_list() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> e;
    e.push_back(smooth("linear", "t", "1"));
    e.push_back(smooth("square", "t^2", "2*t"));
    e.push_back(smooth("cube", "t^3", "3*t^2"));
    e.push_back(smooth("sin", "sin(t)", "cos(t)"));
    e.push_back(smooth("cos", "cos(t)", "-sin(t)"));
    e.push_back(smooth("exp", "exp(t)", "exp(t)"));
    e.push_back(smooth("ln", "ln(t)", "1/t", kPositive));
    // Derivative blows up at 0, so the smooth tag refers to the open half-line.
    e.push_back(smooth("sqrt", "sqrt(t)", "1/(2*sqrt(t))", kNonNegative));
    e.push_back(smooth("rational", "1/(1+t^2)", "-2*t/(1+t^2)^2"));
    e.push_back({"abs", parse("abs(t)"), std::nullopt, kReal, false});
    e.push_back(smooth("const", "3", "0"));
    return e;
  }();
  return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const CorpusEntry& e : corpus_list())
    if (e.name == name) return e;
  std::string known;
  for (const CorpusEntry& e : corpus_list()) known += (known.empty() ? "" : ", ") + e.name;
  throw InvalidArgument("unknown corpus entry '" + std::string(name) + "' (known: " + known + ")");
}

Expr resolve_function(std::string_view text, std::span<const std::string> parameters) {
  constexpr std::string_view prefix = "corpus:";
  if (text.starts_with(prefix)) return corpus_entry(text.substr(prefix.size())).f;
  return parse(text, parameters);
}

}  // namespace pcalc
