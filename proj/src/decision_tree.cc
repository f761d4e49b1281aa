#include "agreement/decision_tree.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "agreement/error.h"
#include "agreement/rng.h"

namespace agreement {
namespace {

constexpr std::size_t kCrossValidationFolds = 5;

// Instances sharing a triple are indistinguishable to every predicate, so
// induction works on per-triple groups.
struct Group {
  Triple triple;
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  std::vector<std::size_t> refs;
};

std::vector<Group> GroupInstances(const FeatureDataset& ds,
                                  const std::vector<std::size_t>& indices) {
  std::map<Triple, Group> by_triple;
  for (std::size_t i : indices) {
    const AgreementInstance& inst = ds.instances[i];
    Group& g = by_triple[inst.triple];
    if (g.refs.empty()) g.triple = inst.triple;
    (inst.agree ? g.n_agree : g.n_disagree) += 1;
    g.refs.push_back(i);
  }
  std::vector<Group> groups;
  groups.reserve(by_triple.size());
  for (auto& [t, g] : by_triple) groups.push_back(std::move(g));
  return groups;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Group>& groups, const Hyperparams& hp,
              std::size_t n_total)
      : groups_(groups), hp_(hp), n_total_(static_cast<double>(n_total)) {}

  std::vector<TreeNode> Build() {
    std::vector<std::size_t> all(groups_.size());
    std::iota(all.begin(), all.end(), 0);
    Grow(all, 0);
    return std::move(nodes_);
  }

 private:
  struct Candidate {
    SplitPredicate predicate;
    double decrease = 0.0;
  };

  int Grow(const std::vector<std::size_t>& members, int depth) {
    std::size_t n_agree = 0, n_disagree = 0;
    for (std::size_t g : members) {
      n_agree += groups_[g].n_agree;
      n_disagree += groups_[g].n_disagree;
    }
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[index].depth = depth;
    nodes_[index].n_agree = n_agree;
    nodes_[index].n_disagree = n_disagree;

    const bool pure = n_agree == 0 || n_disagree == 0;
    std::optional<Candidate> best;
    if (!pure && depth < hp_.max_depth) best = BestSplit(members, n_agree, n_disagree);
    if (!best || best->decrease < hp_.min_impurity_decrease) {
      MakeLeaf(index, members);
      return index;
    }

    std::vector<std::size_t> match, nomatch;
    for (std::size_t g : members) {
      (best->predicate.Matches(groups_[g].triple) ? match : nomatch).push_back(g);
    }
    nodes_[index].predicate = best->predicate;
    nodes_[index].impurity_decrease = best->decrease;
    const int m = Grow(match, depth + 1);
    nodes_[index].match_child = m;
    const int nm = Grow(nomatch, depth + 1);
    nodes_[index].nomatch_child = nm;
    return index;
  }

  // Evaluates every "slot == value" test over the values present at the
  // node. Iteration follows slot order then lexicographic value, and only a
  // strictly larger decrease replaces the incumbent, which applies the tie
  // rule.
  std::optional<Candidate> BestSplit(const std::vector<std::size_t>& members,
                                     std::size_t n_agree,
                                     std::size_t n_disagree) const {
    const std::size_t n_node = n_agree + n_disagree;
    const double node_term = static_cast<double>(n_node) *
                             Impurity(hp_.criterion, n_agree, n_disagree);
    std::optional<Candidate> best;
    for (Slot slot : kAllSlots) {
      std::map<std::string, std::pair<std::size_t, std::size_t>> per_value;
      for (std::size_t g : members) {
        auto& c = per_value[SlotValue(groups_[g].triple, slot)];
        c.first += groups_[g].n_agree;
        c.second += groups_[g].n_disagree;
      }
      for (const auto& [value, counts] : per_value) {
        const std::size_t m_agree = counts.first, m_disagree = counts.second;
        const std::size_t n_match = m_agree + m_disagree;
        if (n_match == 0 || n_match == n_node) continue;
        const std::size_t r_agree = n_agree - m_agree;
        const std::size_t r_disagree = n_disagree - m_disagree;
        // N_node*I(node) - (N_match*I(match) + N_nomatch*I(nomatch)),
        // scaled by 1/N_total; the sum is symmetric in the two children.
        const double children =
            static_cast<double>(n_match) *
                Impurity(hp_.criterion, m_agree, m_disagree) +
            static_cast<double>(n_node - n_match) *
                Impurity(hp_.criterion, r_agree, r_disagree);
        const double decrease = (node_term - children) / n_total_;
        if (!best || decrease > best->decrease) {
          best = Candidate{SplitPredicate{slot, value}, decrease};
        }
      }
    }
    return best;
  }

  void MakeLeaf(int index, const std::vector<std::size_t>& members) {
    TreeNode& leaf = nodes_[index];
    leaf.leaf_id = ++leaf_counter_;
    std::vector<std::size_t> ordered = members;
    std::sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
      return groups_[a].triple < groups_[b].triple;
    });
    for (std::size_t g : ordered) {
      const Group& grp = groups_[g];
      leaf.triples.push_back(
          LeafTriple{grp.triple, TripleCounts{grp.n_agree, grp.n_disagree}});
      leaf.instance_refs.insert(leaf.instance_refs.end(), grp.refs.begin(),
                                grp.refs.end());
    }
    std::sort(leaf.instance_refs.begin(), leaf.instance_refs.end());
  }

  const std::vector<Group>& groups_;
  Hyperparams hp_;
  double n_total_;
  std::vector<TreeNode> nodes_;
  int leaf_counter_ = 0;
};

DecisionTree FitIndices(const FeatureDataset& ds,
                        const std::vector<std::size_t>& indices,
                        const Hyperparams& hp) {
  if (indices.empty()) {
    throw Error(ErrorKind::kEmptyDataset,
                "cannot fit a tree for '" + ds.feature + "' without instances");
  }
  if (hp.max_depth < 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_depth must be >= 0");
  }
  const std::vector<Group> groups = GroupInstances(ds, indices);
  DecisionTree tree;
  tree.feature = ds.feature;
  tree.hyperparams = hp;
  tree.training_size = indices.size();
  tree.nodes = TreeBuilder(groups, hp, indices.size()).Build();
  return tree;
}

struct Confusion {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;  // "agree" is the positive class
};

Confusion Evaluate(const DecisionTree& tree, const FeatureDataset& data,
                   const std::vector<std::size_t>& indices) {
  Confusion c;
  for (std::size_t i : indices) {
    const AgreementInstance& inst = data.instances[i];
    const bool predicted = PredictAgree(tree, inst.triple);
    if (predicted && inst.agree) ++c.tp;
    else if (predicted) ++c.fp;
    else if (inst.agree) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double ScoreConfusion(const Confusion& c, SelectionMetric metric) {
  const std::size_t n = c.tp + c.tn + c.fp + c.fn;
  if (n == 0) return 0.0;
  if (metric == SelectionMetric::kAccuracy) {
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
  }
  return 0.5 * (F1(c.tp, c.fp, c.fn) + F1(c.tn, c.fn, c.fp));
}

std::vector<std::size_t> AllIndices(const FeatureDataset& ds) {
  std::vector<std::size_t> all(ds.instances.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

// Stratified fold assignment: each class is shuffled independently and dealt
// round-robin so every fold sees both classes in proportion.
std::vector<std::size_t> AssignFolds(const FeatureDataset& ds, std::size_t k,
                                     std::uint64_t seed) {
  std::vector<std::size_t> agree, disagree;
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    (ds.instances[i].agree ? agree : disagree).push_back(i);
  }
  Rng rng(seed);
  rng.Shuffle(agree);
  rng.Shuffle(disagree);
  std::vector<std::size_t> fold(ds.instances.size());
  std::size_t position = 0;
  for (std::size_t i : agree) fold[i] = position++ % k;
  for (std::size_t i : disagree) fold[i] = position++ % k;
  return fold;
}

}  // namespace

std::string_view SlotName(Slot slot) {
  switch (slot) {
    case Slot::kRelation: return "relation";
    case Slot::kHeadPos: return "head_pos";
    case Slot::kDepPos: return "dep_pos";
  }
  return "relation";
}

Slot ParseSlot(std::string_view name) {
  for (Slot s : kAllSlots) {
    if (SlotName(s) == name) return s;
  }
  throw Error(ErrorKind::kMalformedDocument,
              "unknown slot '" + std::string(name) + "'");
}

const std::string& SlotValue(const Triple& t, Slot slot) {
  switch (slot) {
    case Slot::kRelation: return t.relation;
    case Slot::kHeadPos: return t.head_pos;
    case Slot::kDepPos: return t.dep_pos;
  }
  return t.relation;
}

std::string_view CriterionName(Criterion c) {
  return c == Criterion::kGini ? "gini" : "entropy";
}

Criterion ParseCriterion(std::string_view name) {
  if (name == "gini") return Criterion::kGini;
  if (name == "entropy") return Criterion::kEntropy;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown criterion '" + std::string(name) + "'");
}

SelectionMetric ParseSelectionMetric(std::string_view name) {
  if (name == "accuracy") return SelectionMetric::kAccuracy;
  if (name == "macro-f1") return SelectionMetric::kMacroF1;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown selection metric '" + std::string(name) + "'");
}

std::string_view SelectionMetricName(SelectionMetric m) {
  return m == SelectionMetric::kAccuracy ? "accuracy" : "macro-f1";
}

double Impurity(Criterion criterion, std::size_t n_agree,
                std::size_t n_disagree) {
  const double n = static_cast<double>(n_agree + n_disagree);
  if (n == 0) return 0.0;
  const double pa = static_cast<double>(n_agree) / n;
  const double pd = static_cast<double>(n_disagree) / n;
  if (criterion == Criterion::kGini) return 1.0 - pa * pa - pd * pd;
  double h = 0.0;
  if (pa > 0) h -= pa * std::log2(pa);
  if (pd > 0) h -= pd * std::log2(pd);
  return h;
}

std::vector<int> DecisionTree::LeafNodes() const {
  std::vector<int> leaves;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[static_cast<std::size_t>(i)].is_leaf()) leaves.push_back(i);
  }
  std::sort(leaves.begin(), leaves.end(), [&](int a, int b) {
    return nodes[static_cast<std::size_t>(a)].leaf_id <
           nodes[static_cast<std::size_t>(b)].leaf_id;
  });
  return leaves;
}

DecisionTree Fit(const FeatureDataset& dataset, const Hyperparams& hyperparams) {
  return FitIndices(dataset, AllIndices(dataset), hyperparams);
}

int RouteToLeaf(const DecisionTree& tree, const Triple& triple) {
  int index = 0;
  while (true) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.is_leaf()) return index;
    index = node.predicate->Matches(triple) ? node.match_child : node.nomatch_child;
  }
}

int PredictLeaf(const DecisionTree& tree, const Triple& triple) {
  return tree.nodes[static_cast<std::size_t>(RouteToLeaf(tree, triple))].leaf_id;
}

bool PredictAgree(const DecisionTree& tree, const Triple& triple) {
  const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(RouteToLeaf(tree, triple))];
  return leaf.n_agree > leaf.n_disagree;
}

std::size_t LeafCount(const DecisionTree& tree) {
  return static_cast<std::size_t>(std::count_if(
      tree.nodes.begin(), tree.nodes.end(),
      [](const TreeNode& n) { return n.is_leaf(); }));
}

int Depth(const DecisionTree& tree) {
  int depth = 0;
  for (const TreeNode& n : tree.nodes) depth = std::max(depth, n.depth);
  return depth;
}

double Score(const DecisionTree& tree, const FeatureDataset& data,
             SelectionMetric metric) {
  return ScoreConfusion(Evaluate(tree, data, AllIndices(data)), metric);
}

std::vector<Hyperparams> HyperGrid::Points() const {
  std::vector<Hyperparams> points;
  for (Criterion c : criteria) {
    for (int d : max_depths) points.push_back(Hyperparams{c, d, min_impurity_decrease});
  }
  return points;
}

HyperGrid HyperGrid::WithDepthRange() const {
  HyperGrid g = *this;
  if (max_depths.empty()) return g;
  const auto [lo, hi] = std::minmax_element(max_depths.begin(), max_depths.end());
  g.max_depths.clear();
  for (int d = *lo; d <= *hi; ++d) g.max_depths.push_back(d);
  return g;
}

GridSearchResult GridSearch(const FeatureDataset& train,
                            const FeatureDataset* validation,
                            const HyperGrid& grid, std::uint64_t seed,
                            SelectionMetric metric) {
  if (train.empty()) {
    throw Error(ErrorKind::kEmptyDataset,
                "grid search for '" + train.feature + "' without instances");
  }
  const std::vector<Hyperparams> points = grid.Points();
  if (points.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "hyperparameter grid is empty");
  }

  const std::vector<std::size_t> all = AllIndices(train);
  const bool use_validation = validation != nullptr && !validation->empty();
  const std::size_t k = std::min(kCrossValidationFolds, train.instances.size());
  const std::vector<std::size_t> folds =
      use_validation || k < 2 ? std::vector<std::size_t>{} : AssignFolds(train, k, seed);

  GridSearchResult result;
  std::optional<std::size_t> best_index;
  std::size_t best_leaves = 0;
  double best_score = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    DecisionTree full = FitIndices(train, all, points[p]);
    double score;
    if (use_validation) {
      score = Score(full, *validation, metric);
    } else if (k < 2) {
      score = ScoreConfusion(Evaluate(full, train, all), metric);
    } else {
      double sum = 0.0;
      for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> fit_idx, held_idx;
        for (std::size_t i : all) (folds[i] == f ? held_idx : fit_idx).push_back(i);
        const DecisionTree fold_tree = FitIndices(train, fit_idx, points[p]);
        sum += ScoreConfusion(Evaluate(fold_tree, train, held_idx), metric);
      }
      score = sum / static_cast<double>(k);
    }
    result.scores.push_back(score);
    const std::size_t leaves = LeafCount(full);
    if (!best_index || score > best_score ||
        (score == best_score && leaves < best_leaves)) {
      best_index = p;
      best_score = score;
      best_leaves = leaves;
      result.tree = std::move(full);
    }
  }
  result.best = points[*best_index];
  return result;
}

}  // namespace agreement
