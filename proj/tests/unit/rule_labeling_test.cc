#include <cmath>

#include "doctest.h"
#include "agreement/rule_labeling.h"
#include "helpers.h"
#include "oracles.h"

using namespace agreement;
using testing::Edge;
using testing::KindOf;
using testing::MakeDataset;

namespace {

TreeNode Leaf(int id, std::size_t agree, std::size_t disagree, std::vector<LeafTriple> triples = {}) {
  TreeNode n;
  n.leaf_id = id;
  n.n_agree = agree;
  n.n_disagree = disagree;
  n.triples = std::move(triples);
  return n;
}

TreeNode Split(Slot slot, const std::string& value, int match, int nomatch) {
  TreeNode n;
  n.predicate = SplitPredicate{slot, value};
  n.match_child = match;
  n.nomatch_child = nomatch;
  return n;
}

LeafVerdict Verdict(int id, AgreementLabel label) {
  LeafVerdict v;
  v.leaf_id = id;
  v.label = label;
  return v;
}

// Spanish gender tree in the shape of the paper's illustration:
// dep_pos == NOUN ? (relation == comp:obj ? leaf 1 : leaf 2) : leaf 3.
DecisionTree GenderTree() {
  DecisionTree t;
  t.feature = "Gender";
  t.nodes = {Split(Slot::kDepPos, "NOUN", 1, 4),
             Split(Slot::kRelation, "comp:obj", 2, 3),
             Leaf(1, 120, 100, {{Triple{"VERB", "comp:obj", "NOUN"}, {120, 100}}}),
             Leaf(2, 2433, 1462,
                  {{Triple{"NOUN", "conj", "NOUN"}, {1400, 900}}, {Triple{"NOUN", "det", "NOUN"}, {1033, 562}}}),
             Leaf(3, 58076, 778, {{Triple{"NOUN", "det", "DET"}, {40000, 300}}, {Triple{"NOUN", "mod", "ADJ"}, {18076, 478}}})};
  t.training_size = 120 + 100 + 2433 + 1462 + 58076 + 778;
  return t;
}

}  // namespace

TEST_CASE("chance agreement probability") {
  CHECK(ChanceAgreementProb({{"Sing", 9}, {"Plur", 1}}).p_chance == 0.82);
  CHECK(ChanceAgreementProb({{"Fem", 5}}).p_chance == 1.0);
  CHECK(ChanceAgreementProb({{"A", 1}, {"B", 1}, {"C", 2}}).p_chance == 0.375);
  const ChanceModel m = ChanceAgreementProb({{"Sing", 9}, {"Plur", 1}}, "Number");
  CHECK(m.value_probs.at("Sing") == doctest::Approx(0.9));
  CHECK(m.feature == "Number");
  CHECK(KindOf([] { ChanceAgreementProb({}); }) == ErrorKind::kEmptyMarginals);
  CHECK(KindOf([] { ChanceAgreementProb({{"A", 0}}); }) == ErrorKind::kEmptyMarginals);
}

TEST_CASE("chance model invariants on random marginals") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    ValueCounts c;
    const std::size_t k = 1 + rng.Below(6);
    for (std::size_t i = 0; i < k; ++i) c["v" + std::to_string(i)] = 1 + rng.Below(1000);
    const ChanceModel m = ChanceAgreementProb(c);
    double sum = 0.0, sq = 0.0;
    for (const auto& [v, p] : m.value_probs) {
      CHECK(p > 0.0);
      sum += p;
      sq += p * p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(m.p_chance == doctest::Approx(sq).epsilon(1e-12));
    CHECK(m.p_chance > 0.0);
    CHECK(m.p_chance <= 1.0);
  }
}

TEST_CASE("survival function matches the integration oracle") {
  for (const auto& f : oracle::FrozenSurvivals()) {
    const double integrated = oracle::ChiSquare1Survival(f.chi2);
    CHECK(std::abs(integrated - f.p_value) < 1e-12);
    CHECK(std::abs(ChiSquaredSurvivalDf1(f.chi2) - integrated) < 1e-9);
  }
}

TEST_CASE("survival function is monotone") {
  double prev = ChiSquaredSurvivalDf1(0.0);
  CHECK(prev == 1.0);
  for (double x = 0.05; x < 80.0; x += 0.05) {
    const double p = ChiSquaredSurvivalDf1(x);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("chi-squared goodness of fit") {
  const ChiSquaredResult fit = ChiSquaredGof({82, 18}, 0.82);
  CHECK(fit.chi2 == 0.0);
  CHECK(fit.p_value == 1.0);

  const ChiSquaredResult r = ChiSquaredGof({98, 2}, 0.82);
  CHECK(r.chi2 == doctest::Approx(oracle::kChi2TwoOfHundred).epsilon(1e-12));
  CHECK(r.chi2 == doctest::Approx(17.344).epsilon(1e-4));
  CHECK(std::abs(r.p_value - oracle::ChiSquare1Survival(r.chi2)) < 1e-9);
  CHECK(r.p_value == doctest::Approx(3.12e-5).epsilon(0.01));

  const ChiSquaredResult small = ChiSquaredGof({3, 0}, 0.5);
  CHECK(small.chi2 == doctest::Approx(3.0));
  CHECK(small.p_value == doctest::Approx(0.0832645166635504));
}

TEST_CASE("degenerate expectation") {
  const ChiSquaredResult same = ChiSquaredGof({5, 0}, 1.0);
  CHECK(same.degenerate_expected);
  CHECK(same.chi2 == 0.0);
  CHECK(same.p_value == 1.0);
  const ChiSquaredResult off = ChiSquaredGof({4, 1}, 1.0);
  CHECK(off.degenerate_expected);
  CHECK(std::isinf(off.chi2));
  CHECK(off.p_value == 0.0);
}

TEST_CASE("ratio exactly at chance gives chi2 = 0") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 * (1 + rng.Below(100));
    const std::size_t agree = n * (1 + rng.Below(9)) / 10;
    const double p = static_cast<double>(agree) / static_cast<double>(n);
    const ChiSquaredResult r = ChiSquaredGof({agree, n - agree}, p);
    CHECK(r.chi2 == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK(LabelLeafStatistical(1, {agree, n - agree}, p).label == AgreementLabel::kChance);
  }
}

TEST_CASE("Cramer's phi") {
  CHECK(CramersPhi(0.0, 100) == 0.0);
  CHECK(CramersPhi(60.0, 100) == doctest::Approx(0.6));
  CHECK(CramersPhi(60.0, 100, 2, true) == doctest::Approx(0.7745966692414834));
  CHECK(CramersPhi(50.0, 100) == 0.5);
}

TEST_CASE("hard threshold") {
  CHECK(LabelLeafHard(1, {100, 0}).label == AgreementLabel::kRequired);
  CHECK(LabelLeafHard(1, {90, 10}, 0.9).label == AgreementLabel::kChance);
  const LeafVerdict fig = LabelLeafHard(3, {58076, 778});
  CHECK(fig.label == AgreementLabel::kRequired);
  CHECK(fig.agree_ratio == doctest::Approx(0.98678).epsilon(1e-4));
  CHECK_FALSE(fig.chi2.has_value());
  CHECK_FALSE(fig.p_value.has_value());
  CHECK_FALSE(fig.phi_c.has_value());
}

TEST_CASE("raising the hard threshold never adds required leaves") {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const LeafCounts c{rng.Below(200), rng.Below(200) + 1};
    bool was_required = true;
    for (double t = 0.5; t <= 1.0; t += 0.01) {
      const bool req = LabelLeafHard(1, c, t).label == AgreementLabel::kRequired;
      CHECK((!req || was_required));
      was_required = req;
    }
  }
}

TEST_CASE("statistical labeling") {
  CHECK(LabelLeafStatistical(1, {2433, 1462}, 0.62).label == AgreementLabel::kChance);

  const LeafVerdict few = LabelLeafStatistical(1, {3, 0}, 0.5);
  CHECK(few.label == AgreementLabel::kChance);
  CHECK(*few.chi2 == doctest::Approx(3.0));
  CHECK(*few.p_value == doctest::Approx(0.0833).epsilon(1e-3));
  CHECK(LabelLeafHard(1, {3, 0}).label == AgreementLabel::kRequired);

  const LeafVerdict many = LabelLeafStatistical(1, {1000, 0}, 0.5);
  CHECK(many.label == AgreementLabel::kRequired);
  CHECK(*many.chi2 == doctest::Approx(1000.0));
  CHECK(*many.phi_c == doctest::Approx(1.0));

  // Disagreement majority or below-chance agreement: no test is run.
  const LeafVerdict minority = LabelLeafStatistical(1, {40, 60}, 0.3);
  CHECK(minority.label == AgreementLabel::kChance);
  CHECK_FALSE(minority.chi2.has_value());
  const LeafVerdict below = LabelLeafStatistical(1, {600, 400}, 0.82);
  CHECK(below.label == AgreementLabel::kChance);
  CHECK_FALSE(below.chi2.has_value());

  // phi = 0.25 * n / n ... the gate is strict.
  const LeafVerdict gate = LabelLeafStatistical(1, {75, 25}, 0.5, {0.01, 0.5, false});
  CHECK(*gate.phi_c == doctest::Approx(0.25));
  CHECK(gate.label == AgreementLabel::kChance);
  CHECK(LabelLeafStatistical(1, {75, 25}, 0.5, {0.01, 0.2, false}).label == AgreementLabel::kRequired);
  CHECK(LabelLeafStatistical(1, {75, 25}, 0.5, {0.01, 0.5, true}).label == AgreementLabel::kChance);
}

TEST_CASE("required verdicts always have majority agreement") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const LeafCounts c{rng.Below(500), rng.Below(500) + 1};
    const double p = 0.2 + 0.79 * rng.Uniform();
    const LeafVerdict v = LabelLeafStatistical(1, c, p);
    if (v.label == AgreementLabel::kRequired) CHECK(v.agree_ratio > 0.5);
  }
}

TEST_CASE("all-chance tree collapses to one unconstrained rule") {
  const DecisionTree t = GenderTree();
  const RuleSet rs = MergeRules(t, {Verdict(1, AgreementLabel::kChance), Verdict(2, AgreementLabel::kChance),
                                    Verdict(3, AgreementLabel::kChance)});
  REQUIRE(rs.rules.size() == 1);
  CHECK(rs.rules[0].constraints.empty());
  CHECK(rs.rules[0].label == AgreementLabel::kChance);
  CHECK(rs.rules[0].total() == t.training_size);
  CHECK(DescribeConstraints(rs.rules[0]) == "any");
  CHECK(LabelTriple(rs, Triple{"A", "b", "C"}) == AgreementLabel::kChance);
}

TEST_CASE("sibling chance leaves merge into one rule") {
  const DecisionTree t = GenderTree();
  const RuleSet rs = MergeRules(t, {Verdict(1, AgreementLabel::kChance), Verdict(2, AgreementLabel::kChance),
                                    Verdict(3, AgreementLabel::kRequired)});
  REQUIRE(rs.rules.size() == 2);
  const LabeledRule& chance = rs.rules[0];
  CHECK(chance.label == AgreementLabel::kChance);
  CHECK(chance.source_leaf_ids == std::vector<int>{1, 2});
  CHECK(chance.n_agree == 120 + 2433);
  CHECK(chance.n_disagree == 100 + 1462);
  CHECK(DescribeConstraints(chance) == "dep_pos = NOUN");
  std::set<std::string> rels;
  for (const LeafTriple& lt : chance.triples) rels.insert(lt.triple.relation);
  CHECK(rels == std::set<std::string>{"comp:obj", "conj", "det"});
  CHECK(rs.rules[1].label == AgreementLabel::kRequired);
  CHECK(DescribeConstraints(rs.rules[1]) == "dep_pos not in {NOUN}");

  CHECK(LabelTriple(rs, Triple{"NOUN", "det", "DET"}) == AgreementLabel::kRequired);
  CHECK(LabelTriple(rs, Triple{"NOUN", "mod", "ADJ"}) == AgreementLabel::kRequired);
  CHECK(LabelTriple(rs, Triple{"NOUN", "conj", "NOUN"}) == AgreementLabel::kChance);
  CHECK(LabelTriple(rs, Triple{"AUX", "comp:aux@pass", "NOUN"}) == AgreementLabel::kChance);

  std::size_t total = 0;
  for (const auto& r : rs.rules) total += r.total();
  CHECK(total == t.training_size);
}

TEST_CASE("mixed siblings stay separate") {
  const DecisionTree t = GenderTree();
  const RuleSet rs = MergeRules(t, {Verdict(1, AgreementLabel::kRequired), Verdict(2, AgreementLabel::kChance),
                                    Verdict(3, AgreementLabel::kRequired)});
  CHECK(rs.rules.size() == 3);
  CHECK(DescribeConstraints(rs.rules[0]) == "relation = comp:obj; dep_pos = NOUN");
  CHECK(DescribeConstraints(rs.rules[1]) == "relation not in {comp:obj}; dep_pos = NOUN");
  CHECK(CountRequired(rs) == 2);
}

TEST_CASE("verdict mismatches") {
  const DecisionTree t = GenderTree();
  CHECK(KindOf([&] { MergeRules(t, {Verdict(1, AgreementLabel::kChance)}); }) == ErrorKind::kVerdictMismatch);
  CHECK(KindOf([&] {
          MergeRules(t, {Verdict(1, AgreementLabel::kChance), Verdict(1, AgreementLabel::kChance),
                         Verdict(3, AgreementLabel::kChance)});
        }) == ErrorKind::kVerdictMismatch);
  CHECK(KindOf([&] {
          MergeRules(t, {Verdict(1, AgreementLabel::kChance), Verdict(2, AgreementLabel::kChance),
                         Verdict(7, AgreementLabel::kChance)});
        }) == ErrorKind::kVerdictMismatch);
}

TEST_CASE("a broken partition raises NoMatchingRule") {
  RuleSet rs;
  rs.feature = "Gender";
  LabeledRule r;
  r.constraints[Slot::kRelation] = {ConstraintMode::kIn, {"det"}};
  rs.rules.push_back(r);
  CHECK(KindOf([&] { LabelTriple(rs, Triple{"NOUN", "mod", "ADJ"}); }) == ErrorKind::kNoMatchingRule);
  rs.rules.push_back(LabeledRule{});
  CHECK(KindOf([&] { LabelTriple(rs, Triple{"NOUN", "det", "DET"}); }) == ErrorKind::kNoMatchingRule);
}

TEST_CASE("merge equivalence, partition and idempotence on random trees") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const testing::LabeledTree lt = testing::RandomLabeledTree(rng, 1 + static_cast<int>(rng.Below(6)));
    const RuleSet merged = MergeRules(lt.tree, lt.verdicts);
    const RuleSet again = MergeRules(merged);
    REQUIRE(again.rules.size() == merged.rules.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < merged.rules.size(); ++i) {
      CHECK(again.rules[i].constraints == merged.rules[i].constraints);
      CHECK(again.rules[i].source_leaf_ids == merged.rules[i].source_leaf_ids);
      total += merged.rules[i].total();
    }
    CHECK(total == lt.tree.training_size);
    for (int k = 0; k < 200; ++k) {
      const Triple t = testing::RandomTriple(rng);
      std::size_t matches = 0;
      for (const auto& r : merged.rules) matches += r.Matches(t);
      CHECK(matches == 1);
      CHECK(LabelTriple(merged, t) == testing::LeafLabel(lt, t));
    }
  }
}

TEST_CASE("labeling a fitted tree end to end") {
  const FeatureDataset ds = MakeDataset({{Triple{"NOUN", "det", "DET"}, 300, 0},
                                         {Triple{"VERB", "obj", "NOUN"}, 150, 150}});
  const DecisionTree tree = Fit(ds, {});
  const ChanceModel chance = ChanceAgreementProb({{"A", 1}, {"B", 1}});
  const auto verdicts = LabelLeaves(tree, chance, {});
  REQUIRE(verdicts.size() == 2);
  RuleSet rs = MergeRules(tree, verdicts);
  CHECK(LabelTriple(rs, Triple{"NOUN", "det", "DET"}) == AgreementLabel::kRequired);
  CHECK(LabelTriple(rs, Triple{"VERB", "obj", "NOUN"}) == AgreementLabel::kChance);
  AttachExamples(rs, ds);
  for (const auto& r : rs.rules) {
    CHECK(r.example_refs.size() == r.n_agree);
    CHECK(r.counterexample_refs.size() == r.n_disagree);
  }

  const auto hard = LabelLeaves(tree, chance, {ThresholdMode::kHard, 0.9, {}});
  for (const auto& v : hard) CHECK_FALSE(v.chi2.has_value());
}

TEST_CASE("per-leaf marginals use the leaf's own values") {
  // Leaf values are all "A", so the leaf-local chance probability is 1 and
  // nothing can be required.
  const FeatureDataset ds = MakeDataset({{Triple{"NOUN", "det", "DET"}, 300, 0},
                                         {Triple{"VERB", "obj", "NOUN"}, 150, 150}});
  const DecisionTree tree = Fit(ds, {});
  const auto verdicts = LabelLeavesPerLeafMarginals(tree, ds, {});
  for (const auto& v : verdicts) {
    if (v.agree_ratio == 1.0) {
      CHECK(*v.p_chance == 1.0);
      CHECK(v.label == AgreementLabel::kChance);
    }
  }
}
