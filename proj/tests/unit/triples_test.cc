#include "doctest.h"
#include "agreement/treebank.h"
#include "agreement/triples.h"
#include "helpers.h"

using namespace agreement;
using testing::Edge;
using testing::Fixture;
using testing::KindOf;
using testing::MakeDataset;

namespace {

const char* kFigureTwo =
    "# sent_id = A1\n"
    "1\tLos\tel\tDET\t_\tGender=Masc|Number=Plur\t2\tdet\t_\t_\n"
    "2\tenigmas\tenigma\tNOUN\t_\tGender=Masc|Number=Plur\t3\tsubj\t_\t_\n"
    "3\tson\tser\tVERB\t_\tMood=Ind|Number=Plur|Person=3\t0\troot\t_\t_\n"
    "4\tfáciles\tfácil\tADJ\t_\tNumber=Plur\t3\tcomp:pred\t_\t_\n"
    "\n"
    "# sent_id = B1\n"
    "1\tÉl\tél\tPRON\t_\tNumber=Sing|Person=3\t2\tsubj\t_\t_\n"
    "2\ttiene\ttener\tVERB\t_\tNumber=Sing|Person=3\t0\troot\t_\t_\n"
    "3\tun\tuno\tDET\t_\tNumber=Sing\t4\tdet\t_\t_\n"
    "4\tperro\tperro\tNOUN\t_\tGender=Masc|Number=Sing\t2\tcomp:obj\t_\t_\n"
    "\n";

const AgreementInstance* FindInstance(const FeatureDataset& ds, const std::string& rel) {
  for (const auto& inst : ds.instances) {
    if (inst.triple.relation == rel) return &inst;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("subject and object edges") {
  const Treebank tb = ParseConlluString(kFigureTwo);
  const FeatureDataset number = ExtractInstances(tb, "Number");
  const AgreementInstance* subj = FindInstance(number, "subj");
  REQUIRE(subj);
  CHECK(subj->triple == Triple{"VERB", "subj", "NOUN"});
  CHECK(subj->head_value == "Plur");
  CHECK(subj->agree);
  const AgreementInstance* obj = FindInstance(number, "comp:obj");
  REQUIRE(obj);
  CHECK(obj->triple == Triple{"VERB", "comp:obj", "NOUN"});
  CHECK(obj->agree);
  CHECK(obj->provenance.sent_id == "B1");
  CHECK(obj->provenance.head_id == 2);
  CHECK(obj->provenance.dep_id == 4);
}

TEST_CASE("edges missing the feature on either side are dropped") {
  const Treebank tb = ParseConlluString(kFigureTwo);
  const FeatureDataset gender = ExtractInstances(tb, "Gender");
  REQUIRE(gender.instances.size() == 1);
  CHECK(gender.instances[0].triple == Triple{"NOUN", "det", "DET"});
  CHECK(ExtractInstances(tb, "Case").empty());
}

TEST_CASE("instance count matches an independent double loop") {
  for (const char* name : {"gender12.conllu", "eval_test.conllu", "small_leaf.conllu"}) {
    const Treebank tb = ParseConlluFile(Fixture(name));
    for (const std::string& feature : DefaultFeatures()) {
      std::size_t expected = 0;
      for (const Sentence& s : tb.sentences) {
        for (const Token& dep : s.tokens) {
          if (dep.head == 0) continue;
          for (const Token& head : s.tokens) {
            if (head.id == dep.head && head.feats.count(feature) && dep.feats.count(feature)) ++expected;
          }
        }
      }
      const FeatureDataset ds = ExtractInstances(tb, feature);
      CHECK(ds.instances.size() == expected);
      for (const auto& inst : ds.instances) CHECK(inst.agree == (inst.head_value == inst.dep_value));
    }
  }
}

TEST_CASE("hand-tallied fixture: gender and number") {
  const Treebank tb = ParseConlluFile(Fixture("gender12.conllu"));
  const ValueCounts gender = ValueMarginals(tb, "Gender");
  CHECK(gender == ValueCounts{{"Fem", 6}, {"Masc", 3}});
  const FeatureDataset ds = ExtractInstances(tb, "Gender");
  CHECK(ds.value_marginals == gender);
  CHECK(ds.instances.size() == 5);
  std::size_t agree = 0;
  for (const auto& inst : ds.instances) agree += inst.agree;
  CHECK(agree == 4);
  const TripleTable table = CountTriples(ds);
  CHECK(table.at(Triple{"NOUN", "det", "DET"}).n_agree == 3);
  CHECK(table.at(Triple{"NOUN", "mod", "ADJ"}).n_agree == 1);
  CHECK(table.at(Triple{"NOUN", "mod", "ADJ"}).n_disagree == 1);
  CHECK(ds.relation_vocab == std::vector<std::string>{"det", "mod"});

  CHECK(ValueMarginals(tb, "Number") == ValueCounts{{"Sing", 11}});
  CHECK(ExtractInstances(tb, "Number").instances.size() == 9);
  CHECK(ValueMarginals(tb, "Person") == ValueCounts{{"3", 2}});
  CHECK(ExtractInstances(tb, "Person").empty());
}

TEST_CASE("marginals: proportions, singleton, absence") {
  std::string text;
  for (int i = 0; i < 10; ++i) {
    text += "1\tx\tx\tNOUN\t_\tNumber=" + std::string(i == 0 ? "Plur" : "Sing") +
            "\t0\troot\t_\t_\n\n";
  }
  CHECK(ValueMarginals(ParseConlluString(text), "Number") == ValueCounts{{"Plur", 1}, {"Sing", 9}});
  const Treebank one = ParseConlluString("1\tx\tx\tNOUN\t_\tCase=Nom\t0\troot\t_\t_\n\n");
  CHECK(ValueMarginals(one, "Case") == ValueCounts{{"Nom", 1}});
  CHECK(KindOf([&] { ValueMarginals(one, "Gender"); }) == ErrorKind::kEmptyMarginals);
}

TEST_CASE("top-k triples") {
  std::vector<Edge> edges;
  const char* rels[] = {"a", "b", "c", "d", "e", "f", "g"};
  for (int i = 0; i < 7; ++i) edges.push_back({Triple{"NOUN", rels[i], "DET"}, std::size_t(i + 1), 0});
  const FeatureDataset seven = MakeDataset(edges);
  const auto top = TopKTriples(seven, 20);
  CHECK(top.size() == 7);
  CHECK(top.front().relation == "g");

  const FeatureDataset ab = MakeDataset({{Triple{"NOUN", "b", "DET"}, 99, 0}, {Triple{"NOUN", "a", "DET"}, 100, 0}});
  CHECK(TopKTriples(ab, 2) == std::vector<Triple>{Triple{"NOUN", "a", "DET"}, Triple{"NOUN", "b", "DET"}});

  const FeatureDataset tie = MakeDataset({{Triple{"VERB", "subj", "PRON"}, 3, 0},
                                          {Triple{"NOUN", "subj", "PRON"}, 2, 1},
                                          {Triple{"ADJ", "mod", "ADV"}, 3, 0}});
  const auto t = TopKTriples(tie, 3);
  CHECK(t[0] == Triple{"ADJ", "mod", "ADV"});
  CHECK(t[1] == Triple{"NOUN", "subj", "PRON"});
  CHECK(t[2] == Triple{"VERB", "subj", "PRON"});
  CHECK(TopKTriples(tie, 1).size() == 1);
  CHECK(KindOf([&] { TopKTriples(tie, 0); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("extraction is deterministic") {
  const Treebank tb = ParseConlluFile(Fixture("eval_test.conllu"));
  const FeatureDataset a = ExtractInstances(tb, "Gender");
  const FeatureDataset b = ExtractInstances(tb, "Gender");
  REQUIRE(a.instances.size() == b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    CHECK(a.instances[i].triple == b.instances[i].triple);
    CHECK(a.instances[i].provenance.sent_id == b.instances[i].provenance.sent_id);
  }
  CHECK(a.instances.front().provenance.sent_id == "t1");
}
