#include "agreement/rule_labeling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "agreement/error.h"

namespace agreement {
namespace {

void CheckThreshold(double threshold) {
  if (!(threshold >= 0.5 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "hard threshold must lie in [0.5, 1]");
  }
}

}  // namespace

std::string_view LabelName(AgreementLabel label) {
  return label == AgreementLabel::kRequired ? "required" : "chance";
}

AgreementLabel ParseLabel(std::string_view name) {
  if (name == "required") return AgreementLabel::kRequired;
  if (name == "chance") return AgreementLabel::kChance;
  throw Error(ErrorKind::kMalformedDocument,
              "unknown agreement label '" + std::string(name) + "'");
}

std::string_view ThresholdModeName(ThresholdMode mode) {
  return mode == ThresholdMode::kHard ? "hard" : "statistical";
}

ThresholdMode ParseThresholdMode(std::string_view name) {
  if (name == "hard") return ThresholdMode::kHard;
  if (name == "statistical") return ThresholdMode::kStatistical;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown threshold mode '" + std::string(name) + "'");
}

ChanceModel ChanceAgreementProb(const ValueCounts& marginals,
                                std::string feature) {
  std::uint64_t n = 0, sum_sq = 0;
  for (const auto& [value, count] : marginals) {
    if (count == 0) {
      throw Error(ErrorKind::kEmptyMarginals,
                  "marginal count for '" + value + "' is zero");
    }
    n += count;
    sum_sq += static_cast<std::uint64_t>(count) * count;
  }
  if (n == 0) {
    throw Error(ErrorKind::kEmptyMarginals,
                "no observed values for feature '" + feature + "'");
  }
  ChanceModel model;
  model.feature = std::move(feature);
  const double total = static_cast<double>(n);
  for (const auto& [value, count] : marginals) {
    model.value_probs[value] = static_cast<double>(count) / total;
  }
  // Integer sums keep the result correctly rounded, e.g. {9, 1} -> 82/100.
  model.p_chance = static_cast<double>(sum_sq) / (total * total);
  return model;
}

double ChiSquaredSurvivalDf1(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(0.5 * x));
}

ChiSquaredResult ChiSquaredGof(const LeafCounts& observed, double p_chance) {
  const std::size_t n = observed.total();
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument, "goodness of fit on an empty leaf");
  }
  if (!(p_chance >= 0.0 && p_chance <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "p_chance must lie in [0, 1]");
  }
  const double total = static_cast<double>(n);
  const double expected_agree = total * p_chance;
  const double expected_disagree = total - expected_agree;
  const double o_agree = static_cast<double>(observed.n_agree);
  const double o_disagree = static_cast<double>(observed.n_disagree);

  ChiSquaredResult r;
  if (expected_agree == 0.0 || expected_disagree == 0.0) {
    // Degenerate null: only an exact match is consistent with it.
    r.degenerate_expected = true;
    const bool consistent = expected_agree == 0.0 ? observed.n_agree == 0
                                                  : observed.n_disagree == 0;
    r.chi2 = consistent ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = consistent ? 1.0 : 0.0;
    return r;
  }
  const double d0 = o_disagree - expected_disagree;
  const double d1 = o_agree - expected_agree;
  r.chi2 = d0 * d0 / expected_disagree + d1 * d1 / expected_agree;
  r.p_value = ChiSquaredSurvivalDf1(r.chi2);
  return r;
}

double CramersPhi(double chi2, std::size_t n, int k, bool take_sqrt) {
  if (n == 0 || k < 2) {
    throw Error(ErrorKind::kInvalidArgument, "Cramer's phi needs n >= 1, k >= 2");
  }
  const double phi = chi2 / (static_cast<double>(n) * static_cast<double>(k - 1));
  return take_sqrt ? std::sqrt(phi) : phi;
}

LeafVerdict LabelLeafHard(int leaf_id, const LeafCounts& leaf, double threshold) {
  CheckThreshold(threshold);
  if (leaf.total() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "cannot label an empty leaf");
  }
  LeafVerdict v;
  v.leaf_id = leaf_id;
  v.agree_ratio = leaf.agree_ratio();
  v.label = v.agree_ratio > threshold ? AgreementLabel::kRequired
                                      : AgreementLabel::kChance;
  return v;
}

LeafVerdict LabelLeafStatistical(int leaf_id, const LeafCounts& leaf,
                                 double p_chance,
                                 const StatisticalOptions& options) {
  if (leaf.total() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "cannot label an empty leaf");
  }
  LeafVerdict v;
  v.leaf_id = leaf_id;
  v.agree_ratio = leaf.agree_ratio();
  v.p_chance = p_chance;
  v.label = AgreementLabel::kChance;
  // Only agreement-majority leaves that agree more often than chance can
  // evidence required agreement; the test itself is two-sided.
  if (v.agree_ratio <= 0.5 || v.agree_ratio <= p_chance) return v;

  const ChiSquaredResult gof = ChiSquaredGof(leaf, p_chance);
  v.chi2 = gof.chi2;
  v.p_value = gof.p_value;
  v.phi_c = CramersPhi(gof.chi2, leaf.total(), 2, options.phi_sqrt);
  if (*v.p_value < options.alpha && *v.phi_c > options.phi_min) {
    v.label = AgreementLabel::kRequired;
  }
  return v;
}

std::vector<LeafVerdict> LabelLeaves(const DecisionTree& tree,
                                     const ChanceModel& chance,
                                     const LabelingOptions& options) {
  std::vector<LeafVerdict> verdicts;
  for (int index : tree.LeafNodes()) {
    const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(index)];
    const LeafCounts counts{leaf.n_agree, leaf.n_disagree};
    verdicts.push_back(options.mode == ThresholdMode::kHard
                           ? LabelLeafHard(leaf.leaf_id, counts, options.hard_threshold)
                           : LabelLeafStatistical(leaf.leaf_id, counts, chance.p_chance,
                                                  options.statistical));
  }
  return verdicts;
}

std::vector<LeafVerdict> LabelLeavesPerLeafMarginals(
    const DecisionTree& tree, const FeatureDataset& train,
    const LabelingOptions& options) {
  if (options.mode == ThresholdMode::kHard) {
    return LabelLeaves(tree, ChanceModel{}, options);
  }
  std::vector<LeafVerdict> verdicts;
  for (int index : tree.LeafNodes()) {
    const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(index)];
    if (leaf.instance_refs.size() != leaf.total()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "leaf-local marginals need a tree fitted in this process");
    }
    ValueCounts local;
    for (std::size_t ref : leaf.instance_refs) {
      const AgreementInstance& inst = train.instances.at(ref);
      ++local[inst.head_value];
      ++local[inst.dep_value];
    }
    const ChanceModel chance = ChanceAgreementProb(local, tree.feature);
    verdicts.push_back(LabelLeafStatistical(
        leaf.leaf_id, LeafCounts{leaf.n_agree, leaf.n_disagree},
        chance.p_chance, options.statistical));
  }
  return verdicts;
}

bool LabeledRule::Matches(const Triple& t) const {
  for (const auto& [slot, constraint] : constraints) {
    if (!constraint.Matches(SlotValue(t, slot))) return false;
  }
  return true;
}

namespace {

// Pointer-based working copy of a labeled tree used while collapsing.
struct Draft {
  std::optional<SplitPredicate> predicate;
  std::unique_ptr<Draft> match;
  std::unique_ptr<Draft> nomatch;
  LabeledRule rule;  // meaningful for leaves only
};

std::vector<LeafTriple> UnionTriples(std::vector<LeafTriple> a,
                                     const std::vector<LeafTriple>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end(), [](const LeafTriple& x, const LeafTriple& y) {
    return x.triple < y.triple;
  });
  return a;
}

LabeledRule Combine(LabeledRule a, const LabeledRule& b) {
  a.n_agree += b.n_agree;
  a.n_disagree += b.n_disagree;
  a.source_leaf_ids.insert(a.source_leaf_ids.end(), b.source_leaf_ids.begin(),
                           b.source_leaf_ids.end());
  a.leaf_verdicts.insert(a.leaf_verdicts.end(), b.leaf_verdicts.begin(),
                         b.leaf_verdicts.end());
  a.triples = UnionTriples(std::move(a.triples), b.triples);
  a.example_refs.insert(a.example_refs.end(), b.example_refs.begin(),
                        b.example_refs.end());
  a.counterexample_refs.insert(a.counterexample_refs.end(),
                               b.counterexample_refs.begin(),
                               b.counterexample_refs.end());
  std::sort(a.example_refs.begin(), a.example_refs.end());
  std::sort(a.counterexample_refs.begin(), a.counterexample_refs.end());
  return a;
}

std::unique_ptr<Draft> DraftFrom(const RuleSet& rs, int index) {
  const RuleNode& node = rs.structure.at(static_cast<std::size_t>(index));
  auto d = std::make_unique<Draft>();
  if (node.is_leaf()) {
    d->rule = rs.rules.at(static_cast<std::size_t>(node.rule_index));
    return d;
  }
  d->predicate = node.predicate;
  d->match = DraftFrom(rs, node.match_child);
  d->nomatch = DraftFrom(rs, node.nomatch_child);
  return d;
}

// Bottom-up: once both children are leaves sharing a label they fold into
// their parent, which therefore also collapses whole uniform subtrees.
void Collapse(Draft& d) {
  if (!d.predicate) return;
  Collapse(*d.match);
  Collapse(*d.nomatch);
  if (!d.match->predicate && !d.nomatch->predicate &&
      d.match->rule.label == d.nomatch->rule.label) {
    d.rule = Combine(std::move(d.match->rule), d.nomatch->rule);
    d.predicate.reset();
    d.match.reset();
    d.nomatch.reset();
  }
}

struct PathState {
  std::map<Slot, std::vector<std::string>> equal;
  std::map<Slot, std::vector<std::string>> not_equal;
};

std::map<Slot, SlotConstraint> ConstraintsFromPath(const PathState& path) {
  std::map<Slot, SlotConstraint> out;
  for (Slot slot : kAllSlots) {
    auto eq = path.equal.find(slot);
    auto ne = path.not_equal.find(slot);
    SlotConstraint c;
    if (eq != path.equal.end() && !eq->second.empty()) {
      // Intersection of the equalities, minus any excluded value; an
      // infeasible path yields an empty In-set that matches nothing.
      c.mode = ConstraintMode::kIn;
      const std::string& first = eq->second.front();
      bool feasible = std::all_of(eq->second.begin(), eq->second.end(),
                                  [&](const std::string& v) { return v == first; });
      if (ne != path.not_equal.end() &&
          std::find(ne->second.begin(), ne->second.end(), first) != ne->second.end()) {
        feasible = false;
      }
      if (feasible) c.values.insert(first);
      out.emplace(slot, std::move(c));
    } else if (ne != path.not_equal.end() && !ne->second.empty()) {
      c.mode = ConstraintMode::kNotIn;
      c.values.insert(ne->second.begin(), ne->second.end());
      out.emplace(slot, std::move(c));
    }
  }
  return out;
}

int Flatten(Draft& d, PathState& path, RuleSet& out) {
  const int index = static_cast<int>(out.structure.size());
  out.structure.emplace_back();
  if (!d.predicate) {
    LabeledRule rule = std::move(d.rule);
    rule.rule_id = static_cast<int>(out.rules.size()) + 1;
    rule.constraints = ConstraintsFromPath(path);
    out.structure[static_cast<std::size_t>(index)].rule_index =
        static_cast<int>(out.rules.size());
    out.rules.push_back(std::move(rule));
    return index;
  }
  const SplitPredicate pred = *d.predicate;
  out.structure[static_cast<std::size_t>(index)].predicate = pred;

  path.equal[pred.slot].push_back(pred.value);
  const int m = Flatten(*d.match, path, out);
  path.equal[pred.slot].pop_back();

  path.not_equal[pred.slot].push_back(pred.value);
  const int nm = Flatten(*d.nomatch, path, out);
  path.not_equal[pred.slot].pop_back();

  out.structure[static_cast<std::size_t>(index)].match_child = m;
  out.structure[static_cast<std::size_t>(index)].nomatch_child = nm;
  return index;
}

RuleSet CollapseRuleSet(const RuleSet& in) {
  if (in.structure.empty()) return in;
  std::unique_ptr<Draft> root = DraftFrom(in, 0);
  Collapse(*root);
  RuleSet out;
  out.feature = in.feature;
  out.threshold_mode = in.threshold_mode;
  out.tree_ref = in.tree_ref;
  out.training_size = in.training_size;
  PathState path;
  Flatten(*root, path, out);
  return out;
}

}  // namespace

RuleSet MergeRules(const DecisionTree& tree,
                   const std::vector<LeafVerdict>& verdicts, ThresholdMode mode) {
  std::map<int, const LeafVerdict*> by_leaf;
  for (const LeafVerdict& v : verdicts) {
    if (!by_leaf.emplace(v.leaf_id, &v).second) {
      throw Error(ErrorKind::kVerdictMismatch,
                  "duplicate verdict for leaf " + std::to_string(v.leaf_id));
    }
  }
  if (by_leaf.size() != LeafCount(tree)) {
    throw Error(ErrorKind::kVerdictMismatch,
                "tree has " + std::to_string(LeafCount(tree)) + " leaves but " +
                    std::to_string(by_leaf.size()) + " verdicts were given");
  }

  RuleSet unmerged;
  unmerged.feature = tree.feature;
  unmerged.threshold_mode = mode;
  unmerged.tree_ref = tree.feature;
  unmerged.training_size = tree.training_size;
  for (const TreeNode& node : tree.nodes) {
    RuleNode rn;
    if (node.is_leaf()) {
      auto it = by_leaf.find(node.leaf_id);
      if (it == by_leaf.end()) {
        throw Error(ErrorKind::kVerdictMismatch,
                    "no verdict for leaf " + std::to_string(node.leaf_id));
      }
      LabeledRule rule;
      rule.label = it->second->label;
      rule.n_agree = node.n_agree;
      rule.n_disagree = node.n_disagree;
      rule.source_leaf_ids = {node.leaf_id};
      rule.leaf_verdicts = {*it->second};
      rule.triples = node.triples;
      rn.rule_index = static_cast<int>(unmerged.rules.size());
      unmerged.rules.push_back(std::move(rule));
    } else {
      rn.predicate = node.predicate;
      rn.match_child = node.match_child;
      rn.nomatch_child = node.nomatch_child;
    }
    unmerged.structure.push_back(std::move(rn));
  }
  return CollapseRuleSet(unmerged);
}

RuleSet MergeRules(const RuleSet& rules) { return CollapseRuleSet(rules); }

RuleSet ChanceBaselineRules(const std::string& feature, std::size_t n_agree,
                            std::size_t n_disagree) {
  RuleSet rs;
  rs.feature = feature;
  rs.tree_ref = feature;
  rs.training_size = n_agree + n_disagree;
  LabeledRule rule;
  rule.rule_id = 1;
  rule.label = AgreementLabel::kChance;
  rule.n_agree = n_agree;
  rule.n_disagree = n_disagree;
  rs.rules.push_back(std::move(rule));
  RuleNode leaf;
  leaf.rule_index = 0;
  rs.structure.push_back(leaf);
  return rs;
}

std::size_t MatchRule(const RuleSet& rules, const Triple& t) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    if (!rules.rules[i].Matches(t)) continue;
    if (found) {
      throw Error(ErrorKind::kNoMatchingRule,
                  "triple " + ToString(t) + " matches rules " +
                      std::to_string(rules.rules[*found].rule_id) + " and " +
                      std::to_string(rules.rules[i].rule_id));
    }
    found = i;
  }
  if (!found) {
    throw Error(ErrorKind::kNoMatchingRule,
                "no rule of '" + rules.feature + "' matches " + ToString(t));
  }
  return *found;
}

AgreementLabel LabelTriple(const RuleSet& rules, const Triple& t) {
  return rules.rules[MatchRule(rules, t)].label;
}

void AttachExamples(RuleSet& rules, const FeatureDataset& train) {
  for (LabeledRule& r : rules.rules) {
    r.example_refs.clear();
    r.counterexample_refs.clear();
  }
  for (std::size_t i = 0; i < train.instances.size(); ++i) {
    const AgreementInstance& inst = train.instances[i];
    LabeledRule& r = rules.rules[MatchRule(rules, inst.triple)];
    (inst.agree ? r.example_refs : r.counterexample_refs).push_back(i);
  }
}

std::size_t CountRequired(const RuleSet& rules) {
  return static_cast<std::size_t>(std::count_if(
      rules.rules.begin(), rules.rules.end(),
      [](const LabeledRule& r) { return r.label == AgreementLabel::kRequired; }));
}

std::string DescribeConstraints(const LabeledRule& rule) {
  if (rule.constraints.empty()) return "any";
  std::string out;
  for (const auto& [slot, c] : rule.constraints) {
    if (!out.empty()) out += "; ";
    out += SlotName(slot);
    if (c.mode == ConstraintMode::kIn && c.values.size() == 1) {
      out += " = " + *c.values.begin();
      continue;
    }
    out += c.mode == ConstraintMode::kIn ? " in {" : " not in {";
    bool first = true;
    for (const std::string& v : c.values) {
      if (!first) out += ", ";
      out += v;
      first = false;
    }
    out += "}";
  }
  return out;
}

}  // namespace agreement
