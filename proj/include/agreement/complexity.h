#ifndef AGREEMENT_COMPLEXITY_H_
#define AGREEMENT_COMPLEXITY_H_

// Word entropy with James-Stein shrinkage toward the uniform distribution,
// used as a morphological-complexity proxy.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agreement/treebank.h"

namespace agreement {

using WordCounts = std::map<std::string, std::size_t>;

struct ShrinkageProbs {
  std::map<std::string, double> probs;
  double lambda = 0.0;
};

// p(w) = lambda / V + (1 - lambda) * count(w) / n. Without an override,
// lambda is the Hausser-Strimmer estimate clamped to [0, 1] (1 when the
// counts are already uniform).
ShrinkageProbs JsShrinkageProbs(const WordCounts& counts,
                                std::optional<double> lambda_override = std::nullopt);

struct EntropyEstimate {
  std::size_t vocab_size = 0;
  std::size_t total_tokens = 0;
  double lambda = 0.0;
  double entropy_bits = 0.0;
};

EntropyEstimate WordEntropy(const WordCounts& counts,
                            std::optional<double> lambda_override = std::nullopt);
EntropyEstimate WordEntropy(std::span<const std::string> forms,
                            std::optional<double> lambda_override = std::nullopt);
EntropyEstimate WordEntropy(const Treebank& treebank,
                            std::optional<double> lambda_override = std::nullopt);

WordCounts CountForms(const Treebank& treebank);

// Pearson r between entropy and mean leaf count over treebanks present in
// both maps.
double ConcisenessCorrelation(const std::map<std::string, double>& entropies,
                              const std::map<std::string, double>& mean_leaf_counts);

}  // namespace agreement

#endif  // AGREEMENT_COMPLEXITY_H_
