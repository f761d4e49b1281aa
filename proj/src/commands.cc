#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "agreement/cli.h"
#include "agreement/complexity.h"
#include "agreement/error.h"
#include "agreement/report.h"
#include "agreement/serialization.h"
#include "agreement/synthetic.h"

namespace agreement {
namespace {

using Json = nlohmann::ordered_json;

struct ExtractArgs {
  std::string train, dev, out;
  std::vector<std::string> features = DefaultFeatures();
  std::string threshold = "statistical";
  std::string marginals = "global";
  std::string metric = "accuracy";
  std::uint64_t seed = 0;
  bool phi_sqrt = false;
  bool depth_range = false;
  bool baseline = false;
  double alpha = 0.01;
  double phi_min = 0.5;
  double hard_threshold = 0.9;
};

struct EvaluateArgs {
  std::string rules, test, train, out;
  std::size_t top_k = 0;
  bool all = false;
  double tau = kDefaultTau;
  bool baseline = false;
  std::uint64_t seed = 0;
};

struct SheetArgs {
  std::string rules, train, out;
  std::size_t top_k = 20;
  std::size_t examples = 10;
  std::uint64_t seed = 0;
};

struct HrmArgs {
  std::string rules, annotations, out;
  bool lenient = false;
  std::uint64_t seed = 0;
};

struct ComplexityArgs {
  std::vector<std::string> treebanks;
  std::vector<std::string> rules;
  std::optional<double> lambda;
  std::string out;
  std::uint64_t seed = 0;
};

struct CorrelateArgs {
  std::vector<std::string> settings;
  std::string x_key = "arm";
  std::string y_key = "hrm";
  std::string out;
  std::uint64_t seed = 0;
};

struct ReportArgs {
  std::string rules, eval, train, out;
  std::size_t examples = 10;
  std::uint64_t seed = 0;
};

struct GenerateArgs {
  std::string grammar, out;
  std::size_t sentences = 1000;
  std::size_t edges = 8;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
};

struct RecoveryArgs {
  std::string grammar, rules, out;
  std::uint64_t seed = 0;
};

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

Json ReadJsonFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedDocument, "'" + path + "': " + e.what());
  }
}

// "name=value" split at the first '='.
std::pair<std::string, std::string> SplitNamed(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw Error(ErrorKind::kInvalidArgument, "expected name=value, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

int ReportFailures(const std::vector<FeatureError>& errors, std::ostream& err) {
  if (errors.empty()) return kExitOk;
  std::string names;
  for (const FeatureError& e : errors) {
    err << "error: " << e.feature << ": " << e.message << "\n";
    names += (names.empty() ? "" : ", ") + e.feature;
  }
  err << "failed features: " << names << "\n";
  return kExitPartial;
}

Json ErrorsJson(const std::vector<FeatureError>& errors) {
  Json arr = Json::array();
  for (const FeatureError& e : errors) arr.push_back({{"feature", e.feature}, {"message", e.message}});
  return arr;
}

int RunExtract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  ExtractConfig config;
  config.labeling.mode = ParseThresholdMode(a.threshold);
  config.labeling.hard_threshold = a.hard_threshold;
  config.labeling.statistical = {a.alpha, a.phi_min, a.phi_sqrt};
  config.marginals = ParseMarginalMode(a.marginals);
  config.metric = ParseSelectionMetric(a.metric);
  config.depth_range = a.depth_range;
  config.baseline = a.baseline;
  config.seed = a.seed;
  if (config.labeling.hard_threshold < 0.5 || config.labeling.hard_threshold > 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "--hard-threshold must lie in [0.5, 1]");
  }
  if (a.alpha <= 0.0 || a.alpha >= 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "--alpha must lie in (0, 1)");
  }

  const Treebank train = ParseConlluFile(a.train);
  std::optional<Treebank> dev;
  if (!a.dev.empty()) dev = ParseConlluFile(a.dev);

  RulesDocument doc;
  doc.treebank = std::filesystem::path(a.train).filename().string();
  doc.seed = a.seed;
  doc.config = config;
  const auto outcomes = ExtractAll(train, dev ? &*dev : nullptr, a.features, config);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].rules) {
      const FeatureRules& f = *outcomes[i].rules;
      if (f.absent) {
        err << fmt::format("{}: absent\n", f.feature);
      } else {
        err << fmt::format("{}: {} instances, {} rules ({} required)\n", f.feature,
                           f.training_size, f.rules.rules.size(), CountRequired(f.rules));
      }
      doc.features.push_back(*outcomes[i].rules);
    } else {
      doc.errors.push_back({a.features[i], outcomes[i].error});
    }
  }
  Emit(a.out, Dump(ToJson(doc)), out);
  return ReportFailures(doc.errors, err);
}

// Top-k training triples recovered from the rule sets' per-triple counts.
std::vector<Triple> TopKFromRules(const FeatureRules& f, std::size_t k) {
  std::map<Triple, std::size_t> counts;
  for (const LabeledRule& r : f.rules.rules) {
    for (const LeafTriple& lt : r.triples) counts[lt.triple] += lt.counts.total();
  }
  if (counts.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "rule set for '" + f.feature + "' carries no training triples; pass --train");
  }
  std::vector<std::pair<Triple, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<Triple> top;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) top.push_back(ranked[i].first);
  return top;
}

int RunEvaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.all && a.top_k > 0) {
    throw Error(ErrorKind::kInvalidArgument, "--all and --top-k are mutually exclusive");
  }
  if (!(a.tau > 0.0 && a.tau < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "--tau must lie in (0, 1)");
  }
  const RulesDocument doc = LoadRules(a.rules);
  const Treebank test = ParseConlluFile(a.test);
  std::optional<Treebank> train;
  if (!a.train.empty()) train = ParseConlluFile(a.train);

  Json features = Json::array();
  Json absent = Json::array();
  std::vector<FeatureError> errors;
  for (const FeatureRules& f : doc.features) {
    if (f.absent) {
      absent.push_back(f.feature);
      continue;
    }
    try {
      const FeatureDataset test_ds = ExtractInstances(test, f.feature);
      std::vector<Triple> triples;
      if (a.top_k > 0) {
        triples = train ? TopKTriples(ExtractInstances(*train, f.feature), a.top_k)
                        : TopKFromRules(f, a.top_k);
      } else {
        triples = DistinctTriples(test_ds);
      }
      const EvalReport report = a.baseline ? BaselineArm(test_ds, triples, a.tau)
                                           : Arm(f.rules, test_ds, triples, a.tau);
      err << fmt::format("{}: ARM {:.4f}, baseline {:.4f}, {} triples\n", f.feature, report.arm,
                         report.baseline_arm, report.verdicts.size());
      features.push_back(ToJson(report));
    } catch (const Error& e) {
      errors.push_back({f.feature, e.what()});
    }
  }
  Json j{{"format_version", kEvalFormatVersion},
         {"treebank", doc.treebank},
         {"test", std::filesystem::path(a.test).filename().string()},
         {"selection", a.top_k > 0 ? fmt::format("top-{}", a.top_k) : std::string("all")},
         {"tau", a.tau},
         {"baseline", a.baseline},
         {"features", features},
         {"absent", absent},
         {"errors", ErrorsJson(errors)}};
  Emit(a.out, Dump(j), out);
  return ReportFailures(errors, err);
}

int RunSheet(const SheetArgs& a, std::ostream& out, std::ostream&) {
  const RulesDocument doc = LoadRules(a.rules);
  const Treebank train = ParseConlluFile(a.train);
  Emit(a.out, BuildAnnotationSheet(doc, train, {a.top_k, a.examples, a.seed}), out);
  return kExitOk;
}

int RunHrm(const HrmArgs& a, std::ostream& out, std::ostream& err) {
  const RulesDocument doc = LoadRules(a.rules);
  std::ifstream in(a.annotations, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read '" + a.annotations + "'");
  const std::vector<AnnotationRecord> records = ReadAnnotationsTsv(in);
  if (records.empty()) throw Error(ErrorKind::kEmptyAnnotations, "no labeled rows in '" + a.annotations + "'");

  Json features = Json::array();
  std::vector<FeatureError> errors;
  for (const FeatureRules& f : doc.features) {
    const bool annotated = std::any_of(records.begin(), records.end(),
                                       [&](const AnnotationRecord& r) { return r.feature == f.feature; });
    if (!annotated) continue;
    try {
      const HrmResult res = Hrm(f.rules, records, !a.lenient);
      Json details = Json::array();
      for (const HumanScore& s : res.details) {
        details.push_back({{"relation", s.triple.relation},
                           {"head_pos", s.triple.head_pos},
                           {"dep_pos", s.triple.dep_pos},
                           {"human_label", std::string(HumanLabelName(s.human_label))},
                           {"mapped_label", std::string(LabelName(s.mapped_label))},
                           {"tree_label", std::string(LabelName(s.tree_label))},
                           {"score", s.score}});
      }
      err << fmt::format("{}: HRM {:.4f} over {} triples\n", f.feature, res.hrm, res.details.size());
      features.push_back(
          {{"feature", f.feature}, {"hrm", res.hrm}, {"n_triples", res.details.size()}, {"details", details}});
    } catch (const Error& e) {
      errors.push_back({f.feature, e.what()});
    }
  }
  for (const AnnotationRecord& r : records) {
    if (!doc.Find(r.feature) &&
        std::none_of(errors.begin(), errors.end(), [&](const FeatureError& e) { return e.feature == r.feature; })) {
      errors.push_back({r.feature, "annotations name a feature missing from the rules file"});
    }
  }
  Json j{{"format_version", kHrmFormatVersion},
         {"treebank", doc.treebank},
         {"mapping", a.lenient ? "lenient" : "strict"},
         {"features", features},
         {"errors", ErrorsJson(errors)}};
  Emit(a.out, Dump(j), out);
  return ReportFailures(errors, err);
}

int RunComplexity(const ComplexityArgs& a, std::ostream& out, std::ostream& err) {
  std::map<std::string, double> entropies;
  std::map<std::string, double> leaf_means;
  std::vector<std::pair<std::string, EntropyEstimate>> rows;
  for (const std::string& spec : a.treebanks) {
    auto [name, path] = spec.find('=') == std::string::npos
                            ? std::pair{std::filesystem::path(spec).stem().string(), spec}
                            : SplitNamed(spec);
    const EntropyEstimate est = WordEntropy(ParseConlluFile(path), a.lambda);
    entropies[name] = est.entropy_bits;
    rows.emplace_back(name, est);
  }
  for (const std::string& spec : a.rules) {
    const auto [name, path] = SplitNamed(spec);
    const RulesDocument doc = LoadRules(path);
    double sum = 0.0;
    std::size_t n = 0;
    for (const FeatureRules& f : doc.features) {
      if (f.absent || !f.tree) continue;
      sum += static_cast<double>(LeafCount(*f.tree));
      ++n;
    }
    if (n > 0) leaf_means[name] = sum / static_cast<double>(n);
  }

  std::string text = "treebank\ttokens\tvocab\tlambda\tentropy_bits";
  if (!leaf_means.empty()) text += "\tmean_leaves";
  text += "\n";
  for (const auto& [name, est] : rows) {
    text += fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}", name, est.total_tokens, est.vocab_size,
                        est.lambda, est.entropy_bits);
    if (!leaf_means.empty()) {
      const auto it = leaf_means.find(name);
      text += it == leaf_means.end() ? "\t" : fmt::format("\t{:.4f}", it->second);
    }
    text += "\n";
  }
  Emit(a.out, text, out);
  if (leaf_means.empty()) return kExitOk;
  // The table is already out; a degenerate correlation is a partial result.
  try {
    err << fmt::format("entropy vs mean leaf count: r = {:.4f}\n",
                       ConcisenessCorrelation(entropies, leaf_means));
  } catch (const Error& e) {
    err << "correlation unavailable: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

std::map<std::string, double> ScoresByFeature(const Json& doc, const std::string& key,
                                              const std::string& path) {
  std::map<std::string, double> scores;
  if (!doc.contains("features") || !doc.at("features").is_array()) {
    throw Error(ErrorKind::kMalformedDocument, "'" + path + "' has no features array");
  }
  for (const Json& f : doc.at("features")) {
    if (f.contains(key) && f.at(key).is_number()) {
      scores[f.at("feature").get<std::string>()] = f.at(key).get<double>();
    }
  }
  return scores;
}

int RunCorrelate(const CorrelateArgs& a, std::ostream& out, std::ostream& err) {
  // feature -> (x, y) per setting, in setting order.
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> pairs;
  Json settings = Json::array();
  for (const std::string& spec : a.settings) {
    const auto [name, files] = SplitNamed(spec);
    const auto comma = files.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "--setting expects name=x.json,y.json");
    }
    const std::string xpath = files.substr(0, comma), ypath = files.substr(comma + 1);
    const auto xs = ScoresByFeature(ReadJsonFile(xpath), a.x_key, xpath);
    const auto ys = ScoresByFeature(ReadJsonFile(ypath), a.y_key, ypath);
    Json row{{"setting", name}};
    for (const auto& [feature, x] : xs) {
      const auto y = ys.find(feature);
      if (y == ys.end()) continue;
      pairs[feature].first.push_back(x);
      pairs[feature].second.push_back(y->second);
      row[feature] = {{a.x_key, x}, {a.y_key, y->second}};
    }
    settings.push_back(std::move(row));
  }

  Json per_feature = Json::object();
  std::vector<FeatureError> errors;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [feature, xy] : pairs) {
    try {
      const double r = Pearson(xy.first, xy.second);
      per_feature[feature] = r;
      sum += r;
      ++n;
      err << fmt::format("{}: r = {:.4f} over {} settings\n", feature, r, xy.first.size());
    } catch (const Error& e) {
      errors.push_back({feature, e.what()});
    }
  }
  Json j{{"x_key", a.x_key},
         {"y_key", a.y_key},
         {"settings", settings},
         {"pearson", per_feature},
         {"mean_pearson", n > 0 ? Json(sum / static_cast<double>(n)) : Json(nullptr)},
         {"errors", ErrorsJson(errors)}};
  Emit(a.out, Dump(j), out);
  if (n == 0 && errors.empty()) {
    throw Error(ErrorKind::kLengthMismatch, "no feature is scored in every setting");
  }
  return ReportFailures(errors, err);
}

int RunReport(const ReportArgs& a, std::ostream&, std::ostream& err) {
  if (a.out.empty()) throw Error(ErrorKind::kInvalidArgument, "--out directory is required");
  const RulesDocument doc = LoadRules(a.rules);
  const Treebank train = ParseConlluFile(a.train);
  std::optional<std::vector<EvalReport>> eval;
  if (!a.eval.empty()) eval = EvalDocumentFromJson(ReadJsonFile(a.eval));
  const auto pages = BuildHtmlReport(doc, train, eval ? &*eval : nullptr, {a.examples, a.seed});
  WriteHtmlReport(a.out, pages);
  err << fmt::format("wrote {} pages to {}\n", pages.size(), a.out);
  return kExitOk;
}

int RunGenerate(const GenerateArgs& a, std::ostream& out, std::ostream&) {
  PlantedGrammar grammar = LoadGrammarJson(a.grammar);
  if (a.seed) grammar.seed = *a.seed;
  if (a.noise) grammar.noise_rate = *a.noise;
  ValidateGrammar(grammar);
  std::ostringstream text;
  WriteConllu(Generate(grammar, a.sentences, a.edges), text);
  Emit(a.out, text.str(), out);
  return kExitOk;
}

int RunRecovery(const RecoveryArgs& a, std::ostream& out, std::ostream& err) {
  const PlantedGrammar grammar = LoadGrammarJson(a.grammar);
  const RulesDocument doc = LoadRules(a.rules);
  Json features = Json::array();
  std::vector<FeatureError> errors;
  for (const FeatureSpec& spec : grammar.features) {
    const FeatureRules* f = doc.Find(spec.name);
    if (!f) {
      errors.push_back({spec.name, "feature missing from the rules file"});
      continue;
    }
    const RecoveryScore s = ScoreRecovery(grammar, f->rules);
    auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
    features.push_back({{"feature", spec.name}, {"precision", opt(s.precision)}, {"recall", opt(s.recall)}});
    err << fmt::format("{}: precision {}, recall {}\n", spec.name,
                       s.precision ? fmt::format("{:.4f}", *s.precision) : "n/a",
                       s.recall ? fmt::format("{:.4f}", *s.recall) : "n/a");
  }
  Emit(a.out, Dump(Json{{"features", features}, {"errors", ErrorsJson(errors)}}), out);
  return ReportFailures(errors, err);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract and evaluate morphological agreement rules from CoNLL-U treebanks",
               "agree-rules"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Fit, label and merge rules per feature");
  extract->add_option("--train", ex.train, "Training treebank (CoNLL-U)")->required();
  extract->add_option("--dev", ex.dev, "Validation treebank for model selection");
  extract->add_option("--features", ex.features, "Features to model")->delimiter(',');
  extract->add_option("--threshold", ex.threshold, "Leaf labeling: statistical|hard")
      ->check(CLI::IsMember({"statistical", "hard"}));
  extract->add_option("--marginals", ex.marginals, "Chance model: global|per-leaf")
      ->check(CLI::IsMember({"global", "per-leaf"}));
  extract->add_option("--metric", ex.metric, "Selection metric: accuracy|macro-f1")
      ->check(CLI::IsMember({"accuracy", "macro-f1"}));
  extract->add_option("--seed", ex.seed);
  extract->add_flag("--phi-sqrt", ex.phi_sqrt, "Use sqrt(chi2 / (N (k - 1))) for phi");
  extract->add_flag("--depth-range", ex.depth_range, "Search every depth from 6 to 15");
  extract->add_flag("--baseline", ex.baseline, "Emit the all-chance baseline rule set");
  extract->add_option("--alpha", ex.alpha);
  extract->add_option("--phi-min", ex.phi_min);
  extract->add_option("--hard-threshold", ex.hard_threshold);
  extract->add_option("--out", ex.out, "rules.json path (default stdout)");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score rules against a test treebank (ARM)");
  evaluate->add_option("--rules", ev.rules)->required();
  evaluate->add_option("--test", ev.test)->required();
  evaluate->add_option("--train", ev.train, "Training treebank for --top-k selection");
  evaluate->add_option("--top-k", ev.top_k, "Score the K most frequent training triples");
  evaluate->add_flag("--all", ev.all, "Score every distinct test triple (default)");
  evaluate->add_option("--tau", ev.tau);
  evaluate->add_flag("--baseline", ev.baseline, "Score the all-chance baseline");
  evaluate->add_option("--seed", ev.seed);
  evaluate->add_option("--out", ev.out);

  SheetArgs sh;
  auto* sheet = app.add_subcommand("sheet", "Write an annotation sheet (TSV)");
  sheet->add_option("--rules", sh.rules)->required();
  sheet->add_option("--train", sh.train)->required();
  sheet->add_option("--top-k", sh.top_k);
  sheet->add_option("--examples", sh.examples);
  sheet->add_option("--seed", sh.seed);
  sheet->add_option("--out", sh.out);

  HrmArgs hr;
  auto* hrm = app.add_subcommand("hrm", "Score rules against expert annotations (HRM)");
  hrm->add_option("--rules", hr.rules)->required();
  hrm->add_option("--annotations", hr.annotations)->required();
  hrm->add_flag("--lenient", hr.lenient, "Also map 'sometimes' to required");
  hrm->add_option("--seed", hr.seed);
  hrm->add_option("--out", hr.out);

  ComplexityArgs cx;
  auto* complexity = app.add_subcommand("complexity", "Shrinkage word entropy per treebank");
  complexity->add_option("treebanks", cx.treebanks, "[name=]file.conllu")->required();
  complexity->add_option("--rules", cx.rules, "name=rules.json for the leaf-count correlation");
  complexity->add_option("--lambda", cx.lambda, "Fixed shrinkage intensity in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  complexity->add_option("--seed", cx.seed);
  complexity->add_option("--out", cx.out);

  CorrelateArgs co;
  auto* correlate = app.add_subcommand("correlate", "Pearson r between paired scores across settings");
  correlate->add_option("--setting", co.settings, "name=x.json,y.json")->required();
  correlate->add_option("--x-key", co.x_key);
  correlate->add_option("--y-key", co.y_key);
  correlate->add_option("--seed", co.seed);
  correlate->add_option("--out", co.out);

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Write static HTML rule pages");
  report->add_option("--rules", rp.rules)->required();
  report->add_option("--train", rp.train)->required();
  report->add_option("--eval", rp.eval);
  report->add_option("--examples", rp.examples);
  report->add_option("--seed", rp.seed);
  report->add_option("--out", rp.out)->required();

  GenerateArgs gn;
  auto* generate = app.add_subcommand("generate", "Sample a synthetic treebank from a planted grammar");
  generate->add_option("--grammar", gn.grammar)->required();
  generate->add_option("--sentences", gn.sentences);
  generate->add_option("--edges", gn.edges, "Head/dependent pairs per sentence");
  generate->add_option("--seed", gn.seed);
  generate->add_option("--noise", gn.noise)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--out", gn.out);

  RecoveryArgs rc;
  auto* recovery = app.add_subcommand("recovery", "Precision/recall of extracted rules against a planted grammar");
  recovery->add_option("--grammar", rc.grammar)->required();
  recovery->add_option("--rules", rc.rules)->required();
  recovery->add_option("--seed", rc.seed);
  recovery->add_option("--out", rc.out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*extract) return RunExtract(ex, out, err);
    if (*evaluate) return RunEvaluate(ev, out, err);
    if (*sheet) return RunSheet(sh, out, err);
    if (*hrm) return RunHrm(hr, out, err);
    if (*complexity) return RunComplexity(cx, out, err);
    if (*correlate) return RunCorrelate(co, out, err);
    if (*report) return RunReport(rp, out, err);
    if (*generate) return RunGenerate(gn, out, err);
    if (*recovery) return RunRecovery(rc, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace agreement
