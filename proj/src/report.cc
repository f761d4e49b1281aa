#include "agreement/report.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "agreement/error.h"
#include "agreement/rng.h"

namespace agreement {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kStyle = R"(body{font-family:sans-serif;margin:2em;color:#222}
table{border-collapse:collapse;margin:1em 0}
td,th{border:1px solid #bbb;padding:4px 8px;text-align:left;vertical-align:top}
th{background:#eee}
.badge{display:inline-block;padding:2px 8px;border-radius:4px;color:#fff;font-weight:bold}
.required{background:#2b5fb4}
.chance{background:#c98a00}
.rule{border:1px solid #ccc;border-radius:6px;padding:1em;margin:1em 0}
.example{font-family:monospace;margin:2px 0}
.head{color:#2b5fb4;font-weight:bold}
.dep{color:#b42b2b;font-weight:bold}
.muted{color:#777})";

std::string Sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return out;
}

std::string FormatStat(const std::optional<double>& x) {
  if (!x) return "&ndash;";
  if (std::isinf(*x)) return "&infin;";
  return fmt::format("{:.4g}", *x);
}

std::string Badge(AgreementLabel label) {
  return fmt::format("<span class=\"badge {0}\">{0}</span>", LabelName(label));
}

std::string PageHead(const std::string& title) {
  return fmt::format(
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>{}</title>\n<style>\n{}\n</style>\n</head>\n<body>\n",
      HtmlEscape(title), kStyle);
}

std::string RenderExampleHtml(const Treebank& tb, const Provenance& where) {
  const Sentence& s = tb.sentences.at(where.sentence_index);
  std::string out = "<div class=\"example\"><span class=\"muted\">" +
                    HtmlEscape(s.sent_id) + "</span> ";
  for (const Token& t : s.tokens) {
    if (t.id > 1) out += ' ';
    if (t.id == where.head_id) {
      out += "<span class=\"head\">" + HtmlEscape(t.form) + "<sub>H</sub></span>";
    } else if (t.id == where.dep_id) {
      out += "<span class=\"dep\">" + HtmlEscape(t.form) + "<sub>D</sub></span>";
    } else {
      out += HtmlEscape(t.form);
    }
  }
  return out + "</div>\n";
}

std::vector<std::size_t> Sample(Rng& rng, const std::vector<std::size_t>& refs,
                                std::size_t k) {
  std::vector<std::size_t> picked;
  for (std::size_t i : rng.SampleWithoutReplacement(refs.size(), k)) picked.push_back(refs[i]);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::string FeaturePage(const FeatureRules& f, const FeatureDataset& train_ds,
                        const Treebank& train, const EvalReport* eval, Rng& rng,
                        std::size_t examples) {
  std::string html = PageHead(f.feature + " agreement rules");
  html += fmt::format("<p><a href=\"index.html\">&larr; all features</a></p>\n"
                      "<h1>{} agreement</h1>\n",
                      HtmlEscape(f.feature));
  if (f.absent) {
    html += "<p>The feature does not occur on any linked head/dependent pair in the "
            "training data.</p>\n</body>\n</html>\n";
    return html;
  }
  html += fmt::format("<p>{} training instances, {} agreeing. ", f.training_size, f.n_agree);
  if (f.chance) html += fmt::format("Chance-agreement probability {:.4f}. ", f.chance->p_chance);
  if (f.hyperparams) {
    html += fmt::format("Tree: {} criterion, max depth {}, {} leaves.",
                        CriterionName(f.hyperparams->criterion), f.hyperparams->max_depth,
                        f.tree ? LeafCount(*f.tree) : 0);
  }
  html += "</p>\n";
  if (eval) {
    html += fmt::format("<p>ARM {:.3f} (all-chance baseline {:.3f}) over {} test triples, "
                        "&tau; = {}.</p>\n",
                        eval->arm, eval->baseline_arm, eval->verdicts.size(), eval->tau);
  }

  RuleSet rules = f.rules;
  AttachExamples(rules, train_ds);
  html += fmt::format("<h2>{} rules</h2>\n", rules.rules.size());
  for (const LabeledRule& r : rules.rules) {
    html += "<div class=\"rule\">\n";
    html += fmt::format("<h3>Rule {} {}</h3>\n<p><b>{}</b></p>\n", r.rule_id, Badge(r.label),
                        HtmlEscape(DescribeConstraints(r)));
    html += fmt::format("<p>agree: {}, not agree: {}</p>\n", r.n_agree, r.n_disagree);

    html += "<table>\n<tr><th>leaf</th><th>agree ratio</th><th>&chi;&sup2;</th>"
            "<th>p-value</th><th>&phi;<sub>c</sub></th><th>label</th></tr>\n";
    for (const LeafVerdict& v : r.leaf_verdicts) {
      html += fmt::format("<tr><td>{}</td><td>{:.4f}</td><td>{}</td><td>{}</td><td>{}</td>"
                          "<td>{}</td></tr>\n",
                          v.leaf_id, v.agree_ratio, FormatStat(v.chi2), FormatStat(v.p_value),
                          FormatStat(v.phi_c), LabelName(v.label));
    }
    html += "</table>\n";

    if (!r.triples.empty()) {
      html += "<table>\n<tr><th>relation</th><th>head</th><th>dependent</th>"
              "<th>agree</th><th>not agree</th></tr>\n";
      for (const LeafTriple& lt : r.triples) {
        html += fmt::format("<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>\n",
                            HtmlEscape(lt.triple.relation), HtmlEscape(lt.triple.head_pos),
                            HtmlEscape(lt.triple.dep_pos), lt.counts.n_agree,
                            lt.counts.n_disagree);
      }
      html += "</table>\n";
    }

    html += "<h4>Examples</h4>\n";
    for (std::size_t ref : Sample(rng, r.example_refs, examples)) {
      html += RenderExampleHtml(train, train_ds.instances[ref].provenance);
    }
    html += "<h4>Counter-examples</h4>\n";
    const auto counter = Sample(rng, r.counterexample_refs, examples);
    if (counter.empty()) html += "<p class=\"muted\">none</p>\n";
    for (std::size_t ref : counter) {
      html += RenderExampleHtml(train, train_ds.instances[ref].provenance);
    }
    html += "</div>\n";
  }

  if (eval) {
    html += "<h2>Test triples</h2>\n<table>\n<tr><th>relation</th><th>head</th>"
            "<th>dependent</th><th>n</th><th>q</th><th>test</th><th>rules</th><th>match</th></tr>\n";
    for (const TripleVerdict& v : eval->verdicts) {
      html += fmt::format("<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{:.3f}</td>"
                          "<td>{}</td><td>{}</td><td>{}</td></tr>\n",
                          HtmlEscape(v.triple.relation), HtmlEscape(v.triple.head_pos),
                          HtmlEscape(v.triple.dep_pos), v.n_test, v.q, LabelName(v.test_label),
                          LabelName(v.tree_label), v.score ? "&#10003;" : "&#10007;");
    }
    html += "</table>\n";
  }
  html += "</body>\n</html>\n";
  return html;
}

}  // namespace

std::string HtmlEscape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string RenderExample(const Treebank& treebank, const Provenance& where) {
  const Sentence& s = treebank.sentences.at(where.sentence_index);
  std::string out = s.sent_id + " ::";
  for (const Token& t : s.tokens) {
    out += ' ';
    if (t.id == where.head_id) out += "[H:" + t.form + "]";
    else if (t.id == where.dep_id) out += "[D:" + t.form + "]";
    else out += t.form;
  }
  return out;
}

std::string FeaturePageName(const std::string& feature) {
  return "feature_" + Sanitize(feature) + ".html";
}

std::string BuildAnnotationSheet(const RulesDocument& rules, const Treebank& train,
                                 const SheetOptions& options) {
  if (options.top_k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "top-k must be >= 1");
  }
  Rng rng(options.seed);
  std::string out = "feature\trelation\thead_pos\tdep_pos\tn_train";
  for (std::size_t e = 1; e <= options.examples; ++e) out += fmt::format("\texample_{}", e);
  out += "\tlabel\n";

  for (const FeatureRules& f : rules.features) {
    if (f.absent) continue;
    const FeatureDataset ds = ExtractInstances(train, f.feature);
    if (ds.empty()) continue;
    std::map<Triple, std::vector<std::size_t>> by_triple;
    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
      by_triple[ds.instances[i].triple].push_back(i);
    }
    for (const Triple& t : TopKTriples(ds, options.top_k)) {
      const std::vector<std::size_t>& refs = by_triple[t];
      out += fmt::format("{}\t{}\t{}\t{}\t{}", f.feature, t.relation, t.head_pos, t.dep_pos,
                         refs.size());
      const auto picked = Sample(rng, refs, options.examples);
      for (std::size_t e = 0; e < options.examples; ++e) {
        out += '\t';
        if (e < picked.size()) out += RenderExample(train, ds.instances[picked[e]].provenance);
      }
      out += "\t\n";
    }
  }
  return out;
}

EvalReport EvalReportFromJson(const Json& j) {
  try {
    EvalReport r;
    r.feature = j.at("feature").get<std::string>();
    r.arm = j.at("arm").get<double>();
    r.baseline_arm = j.at("baseline_arm").get<double>();
    r.tau = j.at("tau").get<double>();
    for (const Json& v : j.at("verdicts")) {
      TripleVerdict tv;
      tv.triple = Triple{v.at("head_pos").get<std::string>(), v.at("relation").get<std::string>(),
                         v.at("dep_pos").get<std::string>()};
      tv.n_test = v.at("n_test").get<std::size_t>();
      tv.q = v.at("q").get<double>();
      tv.test_label = ParseLabel(v.at("test_label").get<std::string>());
      tv.tree_label = ParseLabel(v.at("tree_label").get<std::string>());
      tv.score = v.at("score").get<int>();
      r.verdicts.push_back(std::move(tv));
    }
    if (j.contains("hrm")) r.hrm = j.at("hrm").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedDocument, e.what());
  }
}

std::vector<EvalReport> EvalDocumentFromJson(const Json& j) {
  std::vector<EvalReport> out;
  if (!j.contains("features")) throw Error(ErrorKind::kMalformedDocument, "eval document lacks features");
  for (const Json& f : j.at("features")) out.push_back(EvalReportFromJson(f));
  return out;
}

std::map<std::string, std::string> BuildHtmlReport(const RulesDocument& rules,
                                                   const Treebank& train,
                                                   const std::vector<EvalReport>* eval,
                                                   const ReportOptions& options) {
  std::map<std::string, std::string> pages;
  Rng rng(options.seed);

  std::string index = PageHead("Agreement rules: " + rules.treebank);
  index += fmt::format("<h1>Agreement rules for {}</h1>\n<p class=\"muted\">threshold: {}</p>\n",
                       HtmlEscape(rules.treebank), ThresholdModeName(rules.config.labeling.mode));
  index += "<table>\n<tr><th>feature</th><th>instances</th><th>rules</th><th>required</th>"
           "<th>ARM</th><th>baseline</th></tr>\n";

  for (const FeatureRules& f : rules.features) {
    const EvalReport* ev = nullptr;
    if (eval) {
      for (const EvalReport& r : *eval) {
        if (r.feature == f.feature) ev = &r;
      }
    }
    const FeatureDataset ds = ExtractInstances(train, f.feature);
    if (!f.absent && ds.instances.size() != f.training_size) {
      throw Error(ErrorKind::kFeatureMismatch,
                  "training file does not match the rules for '" + f.feature + "' (" +
                      std::to_string(ds.instances.size()) + " vs " +
                      std::to_string(f.training_size) + " instances)");
    }
    const std::string name = FeaturePageName(f.feature);
    pages[name] = FeaturePage(f, ds, train, ev, rng, options.examples);
    if (f.absent) {
      index += fmt::format("<tr><td><a href=\"{}\">{}</a></td><td colspan=\"5\" class=\"muted\">"
                           "absent</td></tr>\n",
                           name, HtmlEscape(f.feature));
      continue;
    }
    index += fmt::format("<tr><td><a href=\"{}\">{}</a></td><td>{}</td><td>{}</td><td>{}</td>"
                         "<td>{}</td><td>{}</td></tr>\n",
                         name, HtmlEscape(f.feature), f.training_size, f.rules.rules.size(),
                         CountRequired(f.rules), ev ? fmt::format("{:.3f}", ev->arm) : "&ndash;",
                         ev ? fmt::format("{:.3f}", ev->baseline_arm) : "&ndash;");
  }
  index += "</table>\n</body>\n</html>\n";
  pages["index.html"] = index;
  return pages;
}

void WriteHtmlReport(const std::filesystem::path& dir,
                     const std::map<std::string, std::string>& pages) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, html] : pages) WriteTextFile(dir / name, html);
}

}  // namespace agreement
