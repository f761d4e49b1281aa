#include "agreement/complexity.h"

#include <algorithm>
#include <cmath>

#include "agreement/error.h"
#include "agreement/evaluation.h"

namespace agreement {

ShrinkageProbs JsShrinkageProbs(const WordCounts& counts,
                                std::optional<double> lambda_override) {
  std::size_t n = 0;
  for (const auto& [w, c] : counts) n += c;
  if (counts.empty() || n == 0) {
    throw Error(ErrorKind::kEmptyCounts, "word counts are empty");
  }
  const double total = static_cast<double>(n);
  const double v = static_cast<double>(counts.size());
  const double target = 1.0 / v;

  double lambda;
  if (lambda_override) {
    lambda = *lambda_override;
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "lambda must lie in [0, 1]");
    }
  } else {
    double sum_sq = 0.0, dist = 0.0;
    for (const auto& [w, c] : counts) {
      const double ml = static_cast<double>(c) / total;
      sum_sq += ml * ml;
      dist += (target - ml) * (target - ml);
    }
    const double denom = (total - 1.0) * dist;
    lambda = denom == 0.0 ? 1.0 : std::clamp((1.0 - sum_sq) / denom, 0.0, 1.0);
  }

  ShrinkageProbs out;
  out.lambda = lambda;
  for (const auto& [w, c] : counts) {
    out.probs[w] = lambda * target + (1.0 - lambda) * static_cast<double>(c) / total;
  }
  return out;
}

EntropyEstimate WordEntropy(const WordCounts& counts,
                            std::optional<double> lambda_override) {
  const ShrinkageProbs sp = JsShrinkageProbs(counts, lambda_override);
  EntropyEstimate e;
  e.vocab_size = counts.size();
  for (const auto& [w, c] : counts) e.total_tokens += c;
  e.lambda = sp.lambda;
  const double first = sp.probs.begin()->second;
  if (std::all_of(sp.probs.begin(), sp.probs.end(),
                  [&](const auto& kv) { return kv.second == first; })) {
    e.entropy_bits = std::log2(static_cast<double>(e.vocab_size));
    return e;
  }
  double h = 0.0;
  for (const auto& [w, p] : sp.probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  // Rounding can push the sum a hair outside [0, log2 V].
  e.entropy_bits = std::clamp(h, 0.0, std::log2(static_cast<double>(e.vocab_size)));
  return e;
}

EntropyEstimate WordEntropy(std::span<const std::string> forms,
                            std::optional<double> lambda_override) {
  WordCounts counts;
  for (const std::string& f : forms) ++counts[f];
  return WordEntropy(counts, lambda_override);
}

WordCounts CountForms(const Treebank& treebank) {
  WordCounts counts;
  for (const Sentence& s : treebank.sentences) {
    for (const Token& t : s.tokens) ++counts[t.form];
  }
  return counts;
}

EntropyEstimate WordEntropy(const Treebank& treebank,
                            std::optional<double> lambda_override) {
  return WordEntropy(CountForms(treebank), lambda_override);
}

double ConcisenessCorrelation(const std::map<std::string, double>& entropies,
                              const std::map<std::string, double>& mean_leaf_counts) {
  std::vector<double> xs, ys;
  for (const auto& [name, h] : entropies) {
    auto it = mean_leaf_counts.find(name);
    if (it == mean_leaf_counts.end()) continue;
    xs.push_back(h);
    ys.push_back(it->second);
  }
  return Pearson(xs, ys);
}

}  // namespace agreement
