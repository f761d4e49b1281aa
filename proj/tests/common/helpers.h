#ifndef AGREEMENT_TESTS_HELPERS_H_
#define AGREEMENT_TESTS_HELPERS_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agreement/decision_tree.h"
#include "agreement/error.h"
#include "agreement/rng.h"
#include "agreement/rule_labeling.h"
#include "agreement/triples.h"

namespace testing {

inline std::filesystem::path Fixture(const std::string& name) {
  return std::filesystem::path(FIXTURE_DIR) / name;
}

inline std::optional<agreement::ErrorKind> KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const agreement::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

struct Edge {
  agreement::Triple triple;
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
};

// Dataset with instances in the order given. Values are "A" or "B".
inline agreement::FeatureDataset MakeDataset(const std::vector<Edge>& edges,
                                             const std::string& feature = "Gender") {
  agreement::FeatureDataset ds;
  ds.feature = feature;
  std::size_t sent = 0;
  auto push = [&](const agreement::Triple& t, bool agree) {
    agreement::AgreementInstance inst;
    inst.triple = t;
    inst.feature = feature;
    inst.head_value = "A";
    inst.dep_value = agree ? "A" : "B";
    inst.agree = agree;
    inst.provenance = {"s" + std::to_string(sent + 1), sent, 1, 2};
    ++sent;
    ds.instances.push_back(inst);
    ds.value_marginals["A"] += 1;
    ds.value_marginals[inst.dep_value] += 1;
  };
  for (const Edge& e : edges) {
    for (std::size_t i = 0; i < e.n_agree; ++i) push(e.triple, true);
    for (std::size_t i = 0; i < e.n_disagree; ++i) push(e.triple, false);
  }
  auto vocab = [&](auto get) {
    std::vector<std::string> v;
    for (const auto& inst : ds.instances) v.push_back(get(inst.triple));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  ds.relation_vocab = vocab([](const agreement::Triple& t) { return t.relation; });
  ds.head_pos_vocab = vocab([](const agreement::Triple& t) { return t.head_pos; });
  ds.dep_pos_vocab = vocab([](const agreement::Triple& t) { return t.dep_pos; });
  return ds;
}

inline const std::vector<std::string>& RandomRelations() {
  static const std::vector<std::string> v = {"det", "mod", "subj", "comp:obj", "conj"};
  return v;
}
inline const std::vector<std::string>& RandomPos() {
  static const std::vector<std::string> v = {"NOUN", "VERB", "ADJ", "DET", "PRON"};
  return v;
}

// Random value drawn from the vocabulary or, occasionally, an unseen one.
inline std::string DrawValue(agreement::Rng& rng, const std::vector<std::string>& vocab) {
  if (rng.Below(8) == 0) return "UNSEEN";
  return vocab[rng.Below(vocab.size())];
}

inline agreement::Triple RandomTriple(agreement::Rng& rng) {
  return agreement::Triple{DrawValue(rng, RandomPos()), DrawValue(rng, RandomRelations()),
                           DrawValue(rng, RandomPos())};
}

// Random arena tree with preorder, match-first leaf ids and random labels.
struct LabeledTree {
  agreement::DecisionTree tree;
  std::vector<agreement::LeafVerdict> verdicts;
};

inline LabeledTree RandomLabeledTree(agreement::Rng& rng, int max_depth) {
  using namespace agreement;
  LabeledTree out;
  out.tree.feature = "Gender";
  int next_leaf = 1;
  std::function<int(int)> build = [&](int depth) -> int {
    const int index = static_cast<int>(out.tree.nodes.size());
    out.tree.nodes.emplace_back();
    out.tree.nodes.back().depth = depth;
    const bool split = depth < max_depth && rng.Below(4) != 0;
    if (!split) {
      TreeNode& leaf = out.tree.nodes[static_cast<std::size_t>(index)];
      leaf.leaf_id = next_leaf++;
      leaf.n_agree = rng.Below(50);
      leaf.n_disagree = 1 + rng.Below(50);
      out.tree.training_size += leaf.total();
      LeafVerdict v;
      v.leaf_id = leaf.leaf_id;
      v.label = rng.Below(2) ? AgreementLabel::kRequired : AgreementLabel::kChance;
      v.agree_ratio = static_cast<double>(leaf.n_agree) / static_cast<double>(leaf.total());
      out.verdicts.push_back(v);
      return index;
    }
    const Slot slot = kAllSlots[rng.Below(3)];
    const auto& vocab = slot == Slot::kRelation ? RandomRelations() : RandomPos();
    SplitPredicate pred{slot, vocab[rng.Below(vocab.size())]};
    const int m = build(depth + 1);
    const int nm = build(depth + 1);
    TreeNode& node = out.tree.nodes[static_cast<std::size_t>(index)];
    node.predicate = pred;
    node.match_child = m;
    node.nomatch_child = nm;
    return index;
  };
  build(0);
  // Verdicts in scrambled order; merging must not depend on it.
  rng.Shuffle(out.verdicts);
  return out;
}

inline agreement::AgreementLabel LeafLabel(const LabeledTree& lt, const agreement::Triple& t) {
  const int leaf = agreement::PredictLeaf(lt.tree, t);
  for (const auto& v : lt.verdicts) {
    if (v.leaf_id == leaf) return v.label;
  }
  throw std::logic_error("leaf without verdict");
}

}  // namespace testing

#endif  // AGREEMENT_TESTS_HELPERS_H_
