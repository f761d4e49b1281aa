#ifndef AGREEMENT_RULE_LABELING_H_
#define AGREEMENT_RULE_LABELING_H_

// Leaf labeling (hard ratio threshold or chi-squared goodness of fit against
// a chance-agreement null plus an effect-size gate) and merging of labeled
// leaves into a concise rule set.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agreement/decision_tree.h"
#include "agreement/triples.h"

namespace agreement {

enum class AgreementLabel { kRequired, kChance };

std::string_view LabelName(AgreementLabel label);
AgreementLabel ParseLabel(std::string_view name);

enum class ThresholdMode { kHard, kStatistical };

std::string_view ThresholdModeName(ThresholdMode mode);
ThresholdMode ParseThresholdMode(std::string_view name);

struct ChanceModel {
  std::string feature;
  std::map<std::string, double> value_probs;
  double p_chance = 1.0;
};

// Normalizes value counts and sets p_chance to the sum of squared value
// probabilities. Throws EmptyMarginals for an empty map or zero counts.
ChanceModel ChanceAgreementProb(const ValueCounts& marginals,
                                std::string feature = "");

struct LeafCounts {
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  std::size_t total() const { return n_agree + n_disagree; }
  double agree_ratio() const {
    return static_cast<double>(n_agree) / static_cast<double>(total());
  }
};

struct LeafVerdict {
  int leaf_id = 0;
  AgreementLabel label = AgreementLabel::kChance;
  // Unset when the statistic was not computed (hard mode, or a leaf that
  // never reached the test).
  std::optional<double> chi2;
  std::optional<double> p_value;
  std::optional<double> phi_c;
  std::optional<double> p_chance;
  double agree_ratio = 0.0;
};

struct ChiSquaredResult {
  double chi2 = 0.0;
  double p_value = 1.0;
  // Set when an expected count is zero and the conventional result was used.
  bool degenerate_expected = false;
};

// Survival function of the chi-square distribution with one degree of
// freedom, erfc(sqrt(x / 2)).
double ChiSquaredSurvivalDf1(double x);

// Goodness of fit of (disagree, agree) counts against the expected
// distribution [1 - p_chance, p_chance].
ChiSquaredResult ChiSquaredGof(const LeafCounts& observed, double p_chance);

// chi2 / (n (k - 1)); with `take_sqrt` the textbook sqrt of that quantity.
double CramersPhi(double chi2, std::size_t n, int k = 2, bool take_sqrt = false);

struct StatisticalOptions {
  double alpha = 0.01;
  double phi_min = 0.5;
  bool phi_sqrt = false;
};

LeafVerdict LabelLeafHard(int leaf_id, const LeafCounts& leaf,
                          double threshold = 0.9);

LeafVerdict LabelLeafStatistical(int leaf_id, const LeafCounts& leaf,
                                 double p_chance,
                                 const StatisticalOptions& options = {});

enum class ConstraintMode { kIn, kNotIn };

struct SlotConstraint {
  ConstraintMode mode = ConstraintMode::kIn;
  std::set<std::string> values;

  bool Matches(const std::string& value) const {
    const bool member = values.count(value) != 0;
    return mode == ConstraintMode::kIn ? member : !member;
  }
  bool operator==(const SlotConstraint&) const = default;
};

struct LabeledRule {
  int rule_id = 0;
  // Conjunction over slots; an absent slot is unconstrained.
  std::map<Slot, SlotConstraint> constraints;
  AgreementLabel label = AgreementLabel::kChance;
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  std::vector<int> source_leaf_ids;
  std::vector<LeafVerdict> leaf_verdicts;
  // Training triples covered by the rule, canonical order.
  std::vector<LeafTriple> triples;
  // Instance indices into the training dataset, filled by AttachExamples.
  // Not persisted.
  std::vector<std::size_t> example_refs;
  std::vector<std::size_t> counterexample_refs;

  bool Matches(const Triple& t) const;
  std::size_t total() const { return n_agree + n_disagree; }
};

// Collapsed labeled tree. Internal nodes carry a predicate, leaves point at
// a rule of the owning RuleSet.
struct RuleNode {
  std::optional<SplitPredicate> predicate;
  int match_child = -1;
  int nomatch_child = -1;
  int rule_index = -1;

  bool is_leaf() const { return !predicate.has_value(); }
};

struct RuleSet {
  std::string feature;
  std::vector<LabeledRule> rules;
  std::vector<RuleNode> structure;
  ThresholdMode threshold_mode = ThresholdMode::kStatistical;
  std::string tree_ref;
  std::size_t training_size = 0;
};

struct LabelingOptions {
  ThresholdMode mode = ThresholdMode::kStatistical;
  double hard_threshold = 0.9;
  StatisticalOptions statistical;
};

// One verdict per leaf, in leaf_id order, against a shared chance model.
std::vector<LeafVerdict> LabelLeaves(const DecisionTree& tree,
                                     const ChanceModel& chance,
                                     const LabelingOptions& options);

// Leaf-local variant: the chance model of each leaf is built from the head
// and dependent values of the training instances routed to it.
std::vector<LeafVerdict> LabelLeavesPerLeafMarginals(
    const DecisionTree& tree, const FeatureDataset& train,
    const LabelingOptions& options);

// Merges sibling leaves with the same label and collapses uniformly labeled
// subtrees until no further merge applies.
RuleSet MergeRules(const DecisionTree& tree,
                   const std::vector<LeafVerdict>& verdicts,
                   ThresholdMode mode = ThresholdMode::kStatistical);

// Re-runs the collapse on an existing rule set (a no-op on merged sets).
RuleSet MergeRules(const RuleSet& rules);

// A rule set with one unconstrained Chance rule.
RuleSet ChanceBaselineRules(const std::string& feature,
                            std::size_t n_agree = 0, std::size_t n_disagree = 0);

// Index of the unique rule matching `t`; throws NoMatchingRule otherwise.
std::size_t MatchRule(const RuleSet& rules, const Triple& t);
AgreementLabel LabelTriple(const RuleSet& rules, const Triple& t);

// Fills each rule's example/counterexample refs by routing `train`.
void AttachExamples(RuleSet& rules, const FeatureDataset& train);

std::size_t CountRequired(const RuleSet& rules);

std::string DescribeConstraints(const LabeledRule& rule);

}  // namespace agreement

#endif  // AGREEMENT_RULE_LABELING_H_
