#ifndef AGREEMENT_DECISION_TREE_H_
#define AGREEMENT_DECISION_TREE_H_

// CART induction over categorical one-vs-rest predicates on the three triple
// slots, with a binary agree/disagree target.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agreement/triples.h"

namespace agreement {

enum class Slot { kRelation = 0, kHeadPos = 1, kDepPos = 2 };

inline constexpr Slot kAllSlots[] = {Slot::kRelation, Slot::kHeadPos,
                                     Slot::kDepPos};

std::string_view SlotName(Slot slot);
Slot ParseSlot(std::string_view name);
const std::string& SlotValue(const Triple& t, Slot slot);

// Binary test "slot == value"; the no-match branch holds "slot != value".
struct SplitPredicate {
  Slot slot = Slot::kRelation;
  std::string value;

  bool Matches(const Triple& t) const { return SlotValue(t, slot) == value; }
  bool operator==(const SplitPredicate&) const = default;
};

enum class Criterion { kGini, kEntropy };

std::string_view CriterionName(Criterion c);
Criterion ParseCriterion(std::string_view name);

struct Hyperparams {
  Criterion criterion = Criterion::kGini;
  int max_depth = 6;
  double min_impurity_decrease = 1e-3;

  bool operator==(const Hyperparams&) const = default;
};

struct LeafTriple {
  Triple triple;
  TripleCounts counts;
};

// Nodes live in a flat arena; node 0 is the root. An internal node has a
// predicate and two children, a leaf has a 1-based leaf_id.
struct TreeNode {
  std::optional<SplitPredicate> predicate;
  int match_child = -1;
  int nomatch_child = -1;
  double impurity_decrease = 0.0;

  int leaf_id = 0;
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  // Indices into the training dataset's instances. Not persisted.
  std::vector<std::size_t> instance_refs;
  // Distinct training triples that reached this leaf, in canonical order.
  std::vector<LeafTriple> triples;

  int depth = 0;

  bool is_leaf() const { return !predicate.has_value(); }
  std::size_t total() const { return n_agree + n_disagree; }
};

struct DecisionTree {
  std::string feature;
  std::vector<TreeNode> nodes;
  Hyperparams hyperparams;
  std::size_t training_size = 0;

  const TreeNode& root() const { return nodes.front(); }
  // Leaf node indices in leaf_id order.
  std::vector<int> LeafNodes() const;
};

DecisionTree Fit(const FeatureDataset& dataset, const Hyperparams& hyperparams);

// Arena index of the leaf the triple routes to.
int RouteToLeaf(const DecisionTree& tree, const Triple& triple);
int PredictLeaf(const DecisionTree& tree, const Triple& triple);
// Majority class of the routed leaf; ties go to "disagree".
bool PredictAgree(const DecisionTree& tree, const Triple& triple);
std::size_t LeafCount(const DecisionTree& tree);
int Depth(const DecisionTree& tree);

double Impurity(Criterion criterion, std::size_t n_agree,
                std::size_t n_disagree);

enum class SelectionMetric { kAccuracy, kMacroF1 };

SelectionMetric ParseSelectionMetric(std::string_view name);
std::string_view SelectionMetricName(SelectionMetric m);

double Score(const DecisionTree& tree, const FeatureDataset& data,
             SelectionMetric metric);

struct HyperGrid {
  std::vector<Criterion> criteria = {Criterion::kGini, Criterion::kEntropy};
  std::vector<int> max_depths = {6, 15};
  double min_impurity_decrease = 1e-3;

  // Criterion-major, depth-minor enumeration.
  std::vector<Hyperparams> Points() const;
  // Replaces the depth list by every integer between its min and max.
  HyperGrid WithDepthRange() const;
};

struct GridSearchResult {
  DecisionTree tree;
  Hyperparams best;
  std::vector<double> scores;  // one per grid point, grid order
};

// Validation-set selection when `validation` is given and non-empty,
// otherwise stratified 5-fold cross-validation on `train` (seeded). The
// winner is refit on the full training set.
GridSearchResult GridSearch(const FeatureDataset& train,
                            const FeatureDataset* validation,
                            const HyperGrid& grid, std::uint64_t seed,
                            SelectionMetric metric = SelectionMetric::kAccuracy);

}  // namespace agreement

#endif  // AGREEMENT_DECISION_TREE_H_
