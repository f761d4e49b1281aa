#ifndef AGREEMENT_PIPELINE_H_
#define AGREEMENT_PIPELINE_H_

// End-to-end extraction for one feature: instances -> grid-searched tree ->
// leaf labels -> merged rule set.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agreement/decision_tree.h"
#include "agreement/rule_labeling.h"
#include "agreement/treebank.h"
#include "agreement/triples.h"

namespace agreement {

enum class MarginalMode { kGlobal, kPerLeaf };

std::string_view MarginalModeName(MarginalMode mode);
MarginalMode ParseMarginalMode(std::string_view name);

struct ExtractConfig {
  LabelingOptions labeling;
  MarginalMode marginals = MarginalMode::kGlobal;
  HyperGrid grid;
  bool depth_range = false;
  SelectionMetric metric = SelectionMetric::kAccuracy;
  std::uint64_t seed = 0;
  // Emit the all-chance baseline instead of a fitted rule set.
  bool baseline = false;
};

struct FeatureRules {
  std::string feature;
  bool absent = false;
  std::size_t training_size = 0;
  std::size_t n_agree = 0;
  ValueCounts marginals;
  std::optional<ChanceModel> chance;
  std::optional<Hyperparams> hyperparams;
  std::vector<double> grid_scores;
  std::optional<DecisionTree> tree;
  std::vector<LeafVerdict> verdicts;
  RuleSet rules;
};

FeatureRules ExtractFeatureRules(const Treebank& train, const Treebank* dev,
                                 const std::string& feature,
                                 const ExtractConfig& config);

// Same for `train` already reduced to instances.
FeatureRules ExtractFeatureRules(const FeatureDataset& train,
                                 const FeatureDataset* dev,
                                 const ExtractConfig& config);

struct FeatureOutcome {
  std::optional<FeatureRules> rules;
  std::string error;  // non-empty on failure
};

// Features are processed concurrently; results keep the requested order.
std::vector<FeatureOutcome> ExtractAll(const Treebank& train, const Treebank* dev,
                                       const std::vector<std::string>& features,
                                       const ExtractConfig& config);

}  // namespace agreement

#endif  // AGREEMENT_PIPELINE_H_
