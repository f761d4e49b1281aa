#include "agreement/serialization.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "agreement/error.h"

namespace agreement {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinity; a degenerate chi-squared statistic is stored as a
// string.
Json Number(double x) {
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return x;
}

double ReadNumber(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::kMalformedDocument, "expected a number, found '" + s + "'");
  }
  return j.get<double>();
}

Json Optional(const std::optional<double>& x) {
  return x ? Number(*x) : Json(nullptr);
}

std::optional<double> ReadOptional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return ReadNumber(j.at(key));
}

Json TripleFields(const Triple& t) {
  return Json{{"relation", t.relation}, {"head_pos", t.head_pos}, {"dep_pos", t.dep_pos}};
}

Triple ReadTriple(const Json& j) {
  return Triple{j.at("head_pos").get<std::string>(), j.at("relation").get<std::string>(),
                j.at("dep_pos").get<std::string>()};
}

Json LeafTriples(const std::vector<LeafTriple>& triples) {
  Json arr = Json::array();
  for (const LeafTriple& lt : triples) {
    Json t = TripleFields(lt.triple);
    t["n_agree"] = lt.counts.n_agree;
    t["n_disagree"] = lt.counts.n_disagree;
    arr.push_back(std::move(t));
  }
  return arr;
}

std::vector<LeafTriple> ReadLeafTriples(const Json& arr) {
  std::vector<LeafTriple> out;
  for (const Json& t : arr) {
    out.push_back(LeafTriple{ReadTriple(t), TripleCounts{t.at("n_agree").get<std::size_t>(),
                                                         t.at("n_disagree").get<std::size_t>()}});
  }
  return out;
}

Json PredicateJson(const SplitPredicate& p) {
  return Json{{"slot", std::string(SlotName(p.slot))}, {"value", p.value}};
}

SplitPredicate ReadPredicate(const Json& j) {
  return SplitPredicate{ParseSlot(j.at("slot").get<std::string>()),
                        j.at("value").get<std::string>()};
}

Json VerdictJson(const LeafVerdict& v) {
  return Json{{"leaf_id", v.leaf_id},
              {"label", std::string(LabelName(v.label))},
              {"agree_ratio", v.agree_ratio},
              {"p_chance", Optional(v.p_chance)},
              {"chi2", Optional(v.chi2)},
              {"p_value", Optional(v.p_value)},
              {"phi_c", Optional(v.phi_c)}};
}

LeafVerdict ReadVerdict(const Json& j) {
  LeafVerdict v;
  v.leaf_id = j.at("leaf_id").get<int>();
  v.label = ParseLabel(j.at("label").get<std::string>());
  v.agree_ratio = j.at("agree_ratio").get<double>();
  v.p_chance = ReadOptional(j, "p_chance");
  v.chi2 = ReadOptional(j, "chi2");
  v.p_value = ReadOptional(j, "p_value");
  v.phi_c = ReadOptional(j, "phi_c");
  return v;
}

Json HyperparamsJson(const Hyperparams& hp) {
  return Json{{"criterion", std::string(CriterionName(hp.criterion))},
              {"max_depth", hp.max_depth},
              {"min_impurity_decrease", hp.min_impurity_decrease}};
}

Hyperparams ReadHyperparams(const Json& j) {
  return Hyperparams{ParseCriterion(j.at("criterion").get<std::string>()),
                     j.at("max_depth").get<int>(),
                     j.at("min_impurity_decrease").get<double>()};
}

Json ConfigJson(const ExtractConfig& c) {
  Json criteria = Json::array();
  for (Criterion cr : c.grid.criteria) criteria.push_back(std::string(CriterionName(cr)));
  return Json{{"threshold", std::string(ThresholdModeName(c.labeling.mode))},
              {"hard_threshold", c.labeling.hard_threshold},
              {"alpha", c.labeling.statistical.alpha},
              {"phi_min", c.labeling.statistical.phi_min},
              {"phi_sqrt", c.labeling.statistical.phi_sqrt},
              {"marginals", std::string(MarginalModeName(c.marginals))},
              {"criteria", criteria},
              {"max_depths", c.grid.max_depths},
              {"min_impurity_decrease", c.grid.min_impurity_decrease},
              {"depth_range", c.depth_range},
              {"metric", std::string(SelectionMetricName(c.metric))},
              {"baseline", c.baseline}};
}

ExtractConfig ReadConfig(const Json& j) {
  ExtractConfig c;
  c.labeling.mode = ParseThresholdMode(j.at("threshold").get<std::string>());
  c.labeling.hard_threshold = j.at("hard_threshold").get<double>();
  c.labeling.statistical.alpha = j.at("alpha").get<double>();
  c.labeling.statistical.phi_min = j.at("phi_min").get<double>();
  c.labeling.statistical.phi_sqrt = j.at("phi_sqrt").get<bool>();
  c.marginals = ParseMarginalMode(j.at("marginals").get<std::string>());
  c.grid.criteria.clear();
  for (const Json& cr : j.at("criteria")) c.grid.criteria.push_back(ParseCriterion(cr.get<std::string>()));
  c.grid.max_depths = j.at("max_depths").get<std::vector<int>>();
  c.grid.min_impurity_decrease = j.at("min_impurity_decrease").get<double>();
  c.depth_range = j.at("depth_range").get<bool>();
  c.metric = ParseSelectionMetric(j.at("metric").get<std::string>());
  c.baseline = j.at("baseline").get<bool>();
  return c;
}

Json FeatureJson(const FeatureRules& f) {
  Json j;
  j["feature"] = f.feature;
  j["absent"] = f.absent;
  j["training_size"] = f.training_size;
  j["n_agree"] = f.n_agree;
  Json marginals = Json::object();
  for (const auto& [v, c] : f.marginals) marginals[v] = c;
  j["marginals"] = marginals;
  if (f.chance) {
    Json probs = Json::object();
    for (const auto& [v, p] : f.chance->value_probs) probs[v] = p;
    j["chance"] = Json{{"value_probs", probs}, {"p_chance", f.chance->p_chance}};
  } else {
    j["chance"] = nullptr;
  }
  j["hyperparams"] = f.hyperparams ? HyperparamsJson(*f.hyperparams) : Json(nullptr);
  j["grid_scores"] = f.grid_scores;
  j["tree"] = f.tree ? ToJson(*f.tree) : Json(nullptr);
  Json verdicts = Json::array();
  for (const LeafVerdict& v : f.verdicts) verdicts.push_back(VerdictJson(v));
  j["leaf_verdicts"] = verdicts;
  j["ruleset"] = ToJson(f.rules);
  return j;
}

FeatureRules ReadFeature(const Json& j) {
  FeatureRules f;
  f.feature = j.at("feature").get<std::string>();
  f.absent = j.at("absent").get<bool>();
  f.training_size = j.at("training_size").get<std::size_t>();
  f.n_agree = j.at("n_agree").get<std::size_t>();
  for (const auto& [v, c] : j.at("marginals").items()) f.marginals[v] = c.get<std::size_t>();
  if (!j.at("chance").is_null()) {
    ChanceModel cm;
    cm.feature = f.feature;
    for (const auto& [v, p] : j.at("chance").at("value_probs").items()) cm.value_probs[v] = p.get<double>();
    cm.p_chance = j.at("chance").at("p_chance").get<double>();
    f.chance = std::move(cm);
  }
  if (!j.at("hyperparams").is_null()) f.hyperparams = ReadHyperparams(j.at("hyperparams"));
  f.grid_scores = j.at("grid_scores").get<std::vector<double>>();
  if (!j.at("tree").is_null()) f.tree = TreeFromJson(j.at("tree"), f.feature);
  for (const Json& v : j.at("leaf_verdicts")) f.verdicts.push_back(ReadVerdict(v));
  f.rules = RuleSetFromJson(j.at("ruleset"), f.feature);
  return f;
}

}  // namespace

const FeatureRules* RulesDocument::Find(const std::string& feature) const {
  for (const FeatureRules& f : features) {
    if (f.feature == feature) return &f;
  }
  return nullptr;
}

Json ToJson(const DecisionTree& tree) {
  Json nodes = Json::array();
  for (const TreeNode& n : tree.nodes) {
    Json node{{"depth", n.depth}, {"n_agree", n.n_agree}, {"n_disagree", n.n_disagree}};
    if (n.is_leaf()) {
      node["leaf_id"] = n.leaf_id;
      node["triples"] = LeafTriples(n.triples);
    } else {
      node["predicate"] = PredicateJson(*n.predicate);
      node["match"] = n.match_child;
      node["nomatch"] = n.nomatch_child;
      node["impurity_decrease"] = n.impurity_decrease;
    }
    nodes.push_back(std::move(node));
  }
  return Json{{"hyperparams", HyperparamsJson(tree.hyperparams)},
              {"training_size", tree.training_size},
              {"nodes", nodes}};
}

DecisionTree TreeFromJson(const Json& j, const std::string& feature) {
  DecisionTree tree;
  tree.feature = feature;
  tree.hyperparams = ReadHyperparams(j.at("hyperparams"));
  tree.training_size = j.at("training_size").get<std::size_t>();
  for (const Json& node : j.at("nodes")) {
    TreeNode n;
    n.depth = node.at("depth").get<int>();
    n.n_agree = node.at("n_agree").get<std::size_t>();
    n.n_disagree = node.at("n_disagree").get<std::size_t>();
    if (node.contains("predicate")) {
      n.predicate = ReadPredicate(node.at("predicate"));
      n.match_child = node.at("match").get<int>();
      n.nomatch_child = node.at("nomatch").get<int>();
      n.impurity_decrease = node.at("impurity_decrease").get<double>();
    } else {
      n.leaf_id = node.at("leaf_id").get<int>();
      n.triples = ReadLeafTriples(node.at("triples"));
    }
    tree.nodes.push_back(std::move(n));
  }
  const int size = static_cast<int>(tree.nodes.size());
  if (size == 0) throw Error(ErrorKind::kMalformedDocument, "tree without nodes");
  for (const TreeNode& n : tree.nodes) {
    if (!n.is_leaf() && (n.match_child <= 0 || n.match_child >= size ||
                         n.nomatch_child <= 0 || n.nomatch_child >= size)) {
      throw Error(ErrorKind::kMalformedDocument, "tree child index out of range");
    }
  }
  return tree;
}

Json ToJson(const RuleSet& rs) {
  Json rules = Json::array();
  for (const LabeledRule& r : rs.rules) {
    Json constraints = Json::object();
    for (const auto& [slot, c] : r.constraints) {
      constraints[std::string(SlotName(slot))] =
          Json{{"mode", c.mode == ConstraintMode::kIn ? "in" : "not_in"},
               {"values", std::vector<std::string>(c.values.begin(), c.values.end())}};
    }
    Json verdicts = Json::array();
    for (const LeafVerdict& v : r.leaf_verdicts) verdicts.push_back(VerdictJson(v));
    rules.push_back(Json{{"rule_id", r.rule_id},
                         {"label", std::string(LabelName(r.label))},
                         {"constraints", constraints},
                         {"n_agree", r.n_agree},
                         {"n_disagree", r.n_disagree},
                         {"source_leaf_ids", r.source_leaf_ids},
                         {"leaf_verdicts", verdicts},
                         {"triples", LeafTriples(r.triples)}});
  }
  Json structure = Json::array();
  for (const RuleNode& n : rs.structure) {
    if (n.is_leaf()) {
      structure.push_back(Json{{"rule_index", n.rule_index}});
    } else {
      structure.push_back(Json{{"predicate", PredicateJson(*n.predicate)},
                               {"match", n.match_child},
                               {"nomatch", n.nomatch_child}});
    }
  }
  return Json{{"threshold_mode", std::string(ThresholdModeName(rs.threshold_mode))},
              {"tree_ref", rs.tree_ref},
              {"training_size", rs.training_size},
              {"rules", rules},
              {"structure", structure}};
}

RuleSet RuleSetFromJson(const Json& j, const std::string& feature) {
  RuleSet rs;
  rs.feature = feature;
  rs.threshold_mode = ParseThresholdMode(j.at("threshold_mode").get<std::string>());
  rs.tree_ref = j.at("tree_ref").get<std::string>();
  rs.training_size = j.at("training_size").get<std::size_t>();
  for (const Json& r : j.at("rules")) {
    LabeledRule rule;
    rule.rule_id = r.at("rule_id").get<int>();
    rule.label = ParseLabel(r.at("label").get<std::string>());
    for (const auto& [slot, c] : r.at("constraints").items()) {
      SlotConstraint sc;
      const std::string mode = c.at("mode").get<std::string>();
      if (mode != "in" && mode != "not_in") {
        throw Error(ErrorKind::kMalformedDocument, "unknown constraint mode '" + mode + "'");
      }
      sc.mode = mode == "in" ? ConstraintMode::kIn : ConstraintMode::kNotIn;
      for (const Json& v : c.at("values")) sc.values.insert(v.get<std::string>());
      rule.constraints.emplace(ParseSlot(slot), std::move(sc));
    }
    rule.n_agree = r.at("n_agree").get<std::size_t>();
    rule.n_disagree = r.at("n_disagree").get<std::size_t>();
    rule.source_leaf_ids = r.at("source_leaf_ids").get<std::vector<int>>();
    for (const Json& v : r.at("leaf_verdicts")) rule.leaf_verdicts.push_back(ReadVerdict(v));
    rule.triples = ReadLeafTriples(r.at("triples"));
    rs.rules.push_back(std::move(rule));
  }
  for (const Json& n : j.at("structure")) {
    RuleNode node;
    if (n.contains("predicate")) {
      node.predicate = ReadPredicate(n.at("predicate"));
      node.match_child = n.at("match").get<int>();
      node.nomatch_child = n.at("nomatch").get<int>();
    } else {
      node.rule_index = n.at("rule_index").get<int>();
      if (node.rule_index < 0 || node.rule_index >= static_cast<int>(rs.rules.size())) {
        throw Error(ErrorKind::kMalformedDocument, "rule index out of range");
      }
    }
    rs.structure.push_back(std::move(node));
  }
  return rs;
}

Json ToJson(const RulesDocument& doc) {
  Json features = Json::array();
  for (const FeatureRules& f : doc.features) features.push_back(FeatureJson(f));
  Json errors = Json::array();
  for (const FeatureError& e : doc.errors) {
    errors.push_back(Json{{"feature", e.feature}, {"message", e.message}});
  }
  return Json{{"format_version", doc.format_version},
              {"treebank", doc.treebank},
              {"seed", doc.seed},
              {"config", ConfigJson(doc.config)},
              {"features", features},
              {"errors", errors}};
}

RulesDocument RulesDocumentFromJson(const Json& j) {
  try {
    RulesDocument doc;
    doc.format_version = j.at("format_version").get<std::string>();
    if (doc.format_version != kRulesFormatVersion) {
      throw Error(ErrorKind::kMalformedDocument,
                  "unsupported rules format '" + doc.format_version + "'");
    }
    doc.treebank = j.at("treebank").get<std::string>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.config = ReadConfig(j.at("config"));
    for (const Json& f : j.at("features")) doc.features.push_back(ReadFeature(f));
    for (const Json& e : j.value("errors", Json::array())) {
      doc.errors.push_back(FeatureError{e.at("feature").get<std::string>(),
                                        e.at("message").get<std::string>()});
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedDocument, e.what());
  }
}

Json ToJson(const EvalReport& r) {
  Json verdicts = Json::array();
  for (const TripleVerdict& v : r.verdicts) {
    Json t = TripleFields(v.triple);
    t["n_test"] = v.n_test;
    t["q"] = v.q;
    t["test_label"] = std::string(LabelName(v.test_label));
    t["tree_label"] = std::string(LabelName(v.tree_label));
    t["score"] = v.score;
    verdicts.push_back(std::move(t));
  }
  Json j{{"feature", r.feature},
         {"arm", r.arm},
         {"baseline_arm", r.baseline_arm},
         {"tau", r.tau},
         {"n_triples", r.verdicts.size()},
         {"verdicts", verdicts}};
  if (r.hrm) {
    j["hrm"] = *r.hrm;
    Json details = Json::array();
    for (const HumanScore& s : r.hrm_details) {
      Json t = TripleFields(s.triple);
      t["human_label"] = std::string(HumanLabelName(s.human_label));
      t["mapped_label"] = std::string(LabelName(s.mapped_label));
      t["tree_label"] = std::string(LabelName(s.tree_label));
      t["score"] = s.score;
      details.push_back(std::move(t));
    }
    j["hrm_details"] = details;
  }
  return j;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void SaveRules(const RulesDocument& doc, const std::filesystem::path& path) {
  WriteTextFile(path, Dump(ToJson(doc)));
}

RulesDocument LoadRules(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedDocument, path.string() + ": " + e.what());
  }
  return RulesDocumentFromJson(j);
}

}  // namespace agreement
