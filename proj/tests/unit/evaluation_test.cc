#include <sstream>

#include "doctest.h"
#include "agreement/evaluation.h"
#include "agreement/treebank.h"
#include "helpers.h"
#include "oracles.h"

using namespace agreement;
using testing::Edge;
using testing::Fixture;
using testing::KindOf;
using testing::MakeDataset;

namespace {

const Triple kDet{"NOUN", "det", "DET"};
const Triple kMod{"NOUN", "mod", "ADJ"};
const Triple kSubj{"VERB", "subj", "PRON"};
const Triple kConj{"NOUN", "conj", "NOUN"};
const Triple kObj{"VERB", "comp:obj", "NOUN"};

// Required exactly for the given triples.
RuleSet RulesRequiring(const std::vector<Triple>& required) {
  RuleSet rs = ChanceBaselineRules("Gender");
  if (required.empty()) return rs;
  RuleSet out;
  out.feature = "Gender";
  std::set<std::string> rels;
  for (const Triple& t : required) rels.insert(t.relation);
  // Constrained on relation only; enough for the triples used here.
  LabeledRule yes;
  yes.rule_id = 1;
  yes.label = AgreementLabel::kRequired;
  yes.constraints[Slot::kRelation] = {ConstraintMode::kIn, rels};
  LabeledRule no;
  no.rule_id = 2;
  no.constraints[Slot::kRelation] = {ConstraintMode::kNotIn, rels};
  out.rules = {yes, no};
  return out;
}

}  // namespace

TEST_CASE("empirical agreement") {
  const FeatureDataset ds = MakeDataset({{kDet, 19, 1}});
  const EmpiricalAgreement e = ComputeEmpiricalAgreement(ds, kDet);
  CHECK(e.n_test == 20);
  CHECK(*e.q == doctest::Approx(0.95));
  const EmpiricalAgreement none = ComputeEmpiricalAgreement(ds, kMod);
  CHECK(none.n_test == 0);
  CHECK_FALSE(none.q.has_value());
}

TEST_CASE("hand-tallied test fixture") {
  const FeatureDataset test = ExtractInstances(ParseConlluFile(Fixture("eval_test.conllu")), "Gender");
  CHECK(*ComputeEmpiricalAgreement(test, kDet).q == 0.875);
  CHECK(ComputeEmpiricalAgreement(test, kDet).n_test == 8);

  const std::vector<Triple> all = DistinctTriples(test);
  CHECK(all.size() == 5);
  const EvalReport base = BaselineArm(test, all);
  CHECK(base.arm == 0.6);
  CHECK(base.baseline_arm == 0.6);

  // Exactly the q > 0.95 triples are required: perfect fit.
  const EvalReport perfect = Arm(RulesRequiring({kMod, kSubj}), test, all);
  CHECK(perfect.arm == 1.0);
  CHECK(perfect.baseline_arm == 0.6);

  const EvalReport partial = Arm(RulesRequiring({kDet, kMod}), test, all);
  // det wrongly required, subj wrongly chance.
  CHECK(partial.arm == doctest::Approx(3.0 / 5.0));
  std::size_t scores = 0;
  for (const auto& v : partial.verdicts) {
    scores += v.score;
    CHECK(v.score == (v.test_label == v.tree_label));
    CHECK(v.test_label == (v.q > 0.95 ? AgreementLabel::kRequired : AgreementLabel::kChance));
  }
  CHECK(partial.arm == doctest::Approx(static_cast<double>(scores) / 5.0).epsilon(1e-15));
}

TEST_CASE("baseline identity") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Edge> edges;
    const std::size_t k = 1 + rng.Below(12);
    for (std::size_t i = 0; i < k; ++i) {
      edges.push_back({Triple{"NOUN", "r" + std::to_string(i), "DET"}, rng.Below(40), rng.Below(3)});
      if (edges.back().n_agree + edges.back().n_disagree == 0) edges.back().n_agree = 1;
    }
    const FeatureDataset test = MakeDataset(edges);
    const auto triples = DistinctTriples(test);
    const EvalReport b = BaselineArm(test, triples);
    std::size_t above = 0;
    for (const auto& v : b.verdicts) above += v.q > kDefaultTau;
    CHECK(b.arm == 1.0 - static_cast<double>(above) / static_cast<double>(b.verdicts.size()));
    CHECK(b.arm >= 0.0);
    CHECK(b.arm <= 1.0);
  }
}

TEST_CASE("baseline extremes") {
  const FeatureDataset all_agree = MakeDataset({{kDet, 5, 0}, {kMod, 3, 0}});
  CHECK(BaselineArm(all_agree, DistinctTriples(all_agree)).arm == 0.0);
  const FeatureDataset none = MakeDataset({{kDet, 5, 5}, {kMod, 19, 1}});
  CHECK(BaselineArm(none, DistinctTriples(none)).arm == 1.0);
}

TEST_CASE("triples absent from test are skipped") {
  const FeatureDataset test = MakeDataset({{kDet, 5, 0}});
  const EvalReport r = Arm(RulesRequiring({kDet}), test, {kDet, kMod});
  CHECK(r.verdicts.size() == 1);
  CHECK(r.arm == 1.0);
  CHECK(KindOf([&] { Arm(RulesRequiring({kDet}), test, {kMod}); }) == ErrorKind::kNoEvaluableTriples);
  CHECK(KindOf([&] { BaselineArm(test, {}); }) == ErrorKind::kNoEvaluableTriples);
}

TEST_CASE("tau comparison is strict") {
  const FeatureDataset test = MakeDataset({{kDet, 19, 1}});
  const EvalReport r = Arm(RulesRequiring({}), test, {kDet});
  CHECK(r.verdicts[0].test_label == AgreementLabel::kChance);
  CHECK(r.arm == 1.0);
}

TEST_CASE("human label mapping and HRM") {
  CHECK(MapHumanLabel(HumanLabel::kAlmostAlways, true) == AgreementLabel::kRequired);
  CHECK(MapHumanLabel(HumanLabel::kSometimes, true) == AgreementLabel::kChance);
  CHECK(MapHumanLabel(HumanLabel::kNeedNot, true) == AgreementLabel::kChance);
  CHECK(MapHumanLabel(HumanLabel::kSometimes, false) == AgreementLabel::kRequired);
  CHECK(MapHumanLabel(HumanLabel::kNeedNot, false) == AgreementLabel::kChance);

  const RuleSet rs = RulesRequiring({kDet, Triple{"PROPN", "appos", "PROPN"}});
  std::vector<AnnotationRecord> ann = {
      {"Gender", kDet, HumanLabel::kAlmostAlways},
      {"Gender", kConj, HumanLabel::kNeedNot},
  };
  CHECK(Hrm(rs, ann).hrm == 1.0);

  ann.push_back({"Gender", Triple{"PROPN", "appos", "PROPN"}, HumanLabel::kSometimes});
  const HrmResult strict = Hrm(rs, ann, true);
  CHECK(strict.details.back().score == 0);
  CHECK(strict.hrm == doctest::Approx(2.0 / 3.0));
  CHECK(Hrm(rs, ann, false).hrm == 1.0);

  // Records for other features are ignored.
  ann.push_back({"Number", kConj, HumanLabel::kAlmostAlways});
  CHECK(Hrm(rs, ann, true).hrm == doctest::Approx(2.0 / 3.0));

  std::vector<AnnotationRecord> shuffled = ann;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    rng.Shuffle(shuffled);
    CHECK(Hrm(rs, shuffled).hrm == Hrm(rs, ann).hrm);
  }

  CHECK(KindOf([&] { Hrm(rs, {}); }) == ErrorKind::kEmptyAnnotations);
  CHECK(KindOf([&] { Hrm(rs, {{"Case", kDet, HumanLabel::kNeedNot}}); }) == ErrorKind::kFeatureMismatch);
}

TEST_CASE("annotation TSV") {
  std::istringstream in(
      "feature\trelation\thead_pos\tdep_pos\tn_train\texample_1\tlabel\n"
      "Gender\tdet\tNOUN\tDET\t12\tfoo\talmost_always\n"
      "Gender\tmod\tNOUN\tADJ\t3\tbar\t\n"
      "Gender\tconj\tNOUN\tNOUN\t2\tbaz\tsometimes\r\n");
  const auto rows = ReadAnnotationsTsv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].triple == kDet);
  CHECK(rows[0].human_label == HumanLabel::kAlmostAlways);
  CHECK(rows[1].human_label == HumanLabel::kSometimes);

  std::istringstream bad("feature\trelation\thead_pos\tdep_pos\tlabel\nGender\tdet\tNOUN\tDET\tmaybe\n");
  CHECK(KindOf([&] { ReadAnnotationsTsv(bad); }) == ErrorKind::kMalformedDocument);
  std::istringstream missing("feature\trelation\tlabel\n");
  CHECK(KindOf([&] { ReadAnnotationsTsv(missing); }) == ErrorKind::kMalformedDocument);
}

TEST_CASE("pearson") {
  const std::vector<double> xs = {1, 2, 3, 4};
  CHECK(Pearson(xs, xs) == doctest::Approx(1.0));
  const std::vector<double> neg = {-1, -2, -3, -4};
  CHECK(Pearson(xs, neg) == doctest::Approx(-1.0));
  const std::vector<double> ys = {2, 4, 5, 9};
  CHECK(Pearson(xs, ys) == doctest::Approx(oracle::kPearson1234).epsilon(1e-12));

  const std::vector<double> one = {1.0};
  CHECK(KindOf([&] { Pearson(one, one); }) == ErrorKind::kLengthMismatch);
  const std::vector<double> three = {1, 2, 3};
  CHECK(KindOf([&] { Pearson(xs, three); }) == ErrorKind::kLengthMismatch);
  const std::vector<double> flat = {2, 2, 2, 2};
  CHECK(KindOf([&] { Pearson(xs, flat); }) == ErrorKind::kZeroVariance);
}

TEST_CASE("pearson is 1 under positive affine maps") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.Below(50);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.Uniform() * 100 - 50;
    const double a = 0.01 + rng.Uniform() * 10, b = rng.Uniform() * 20 - 10;
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
    const double r = Pearson(x, y);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r <= 1.0);
  }
}
