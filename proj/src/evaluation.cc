#include "agreement/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "agreement/error.h"

namespace agreement {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

AgreementLabel TestLabel(double q, double tau) {
  return q > tau ? AgreementLabel::kRequired : AgreementLabel::kChance;
}

EvalReport Score(const std::string& feature, const TripleTable& table,
                 const std::vector<Triple>& triples, double tau,
                 const RuleSet* rules) {
  EvalReport report;
  report.feature = feature;
  report.tau = tau;
  std::size_t model_hits = 0, baseline_hits = 0;
  for (const Triple& t : triples) {
    auto it = table.find(t);
    if (it == table.end() || it->second.total() == 0) continue;
    TripleVerdict v;
    v.triple = t;
    v.n_test = it->second.total();
    v.q = static_cast<double>(it->second.n_agree) / static_cast<double>(v.n_test);
    v.test_label = TestLabel(v.q, tau);
    v.tree_label = rules ? LabelTriple(*rules, t) : AgreementLabel::kChance;
    v.score = v.test_label == v.tree_label ? 1 : 0;
    model_hits += static_cast<std::size_t>(v.score);
    if (v.test_label == AgreementLabel::kChance) ++baseline_hits;
    report.verdicts.push_back(std::move(v));
  }
  if (report.verdicts.empty()) {
    throw Error(ErrorKind::kNoEvaluableTriples,
                "none of the selected triples for '" + feature +
                    "' occur in the test data");
  }
  // Written as 1 - misses/n so the baseline equals 1 - share(q > tau)
  // bit for bit.
  const std::size_t n = report.verdicts.size();
  const auto rate = [n](std::size_t hits) {
    return 1.0 - static_cast<double>(n - hits) / static_cast<double>(n);
  };
  report.arm = rate(model_hits);
  report.baseline_arm = rate(baseline_hits);
  return report;
}

}  // namespace

std::string_view HumanLabelName(HumanLabel label) {
  switch (label) {
    case HumanLabel::kAlmostAlways: return "almost_always";
    case HumanLabel::kSometimes: return "sometimes";
    case HumanLabel::kNeedNot: return "need_not";
  }
  return "need_not";
}

HumanLabel ParseHumanLabel(std::string_view name) {
  if (name == "almost_always") return HumanLabel::kAlmostAlways;
  if (name == "sometimes") return HumanLabel::kSometimes;
  if (name == "need_not") return HumanLabel::kNeedNot;
  throw Error(ErrorKind::kMalformedDocument,
              "unknown annotation label '" + std::string(name) + "'");
}

std::vector<AnnotationRecord> ReadAnnotationsTsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kMalformedDocument, "annotation file is empty");
  }
  const std::vector<std::string> header = SplitTabs(Trim(line));
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[Trim(header[i])] = i;
  for (const char* required : {"feature", "relation", "head_pos", "dep_pos", "label"}) {
    if (column.count(required) == 0) {
      throw Error(ErrorKind::kMalformedDocument,
                  std::string("annotation header lacks column '") + required + "'");
    }
  }

  std::vector<AnnotationRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitTabs(line);
    auto get = [&](const char* name) -> std::string {
      const std::size_t i = column[name];
      return i < fields.size() ? Trim(fields[i]) : std::string();
    };
    const std::string label = get("label");
    if (label.empty()) continue;
    AnnotationRecord rec;
    rec.feature = get("feature");
    rec.triple = Triple{get("head_pos"), get("relation"), get("dep_pos")};
    try {
      rec.human_label = ParseHumanLabel(label);
    } catch (const Error& e) {
      throw Error(ErrorKind::kMalformedDocument,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

EmpiricalAgreement ComputeEmpiricalAgreement(const FeatureDataset& test,
                                             const Triple& triple) {
  EmpiricalAgreement e;
  for (const AgreementInstance& inst : test.instances) {
    if (!(inst.triple == triple)) continue;
    ++e.n_test;
    if (inst.agree) ++e.n_agree;
  }
  if (e.n_test > 0) {
    e.q = static_cast<double>(e.n_agree) / static_cast<double>(e.n_test);
  }
  return e;
}

EvalReport Arm(const RuleSet& rules, const FeatureDataset& test,
               const std::vector<Triple>& triples, double tau) {
  return Score(rules.feature, CountTriples(test), triples, tau, &rules);
}

EvalReport BaselineArm(const FeatureDataset& test,
                       const std::vector<Triple>& triples, double tau) {
  EvalReport r = Score(test.feature, CountTriples(test), triples, tau, nullptr);
  r.arm = r.baseline_arm;
  return r;
}

AgreementLabel MapHumanLabel(HumanLabel label, bool strict) {
  switch (label) {
    case HumanLabel::kAlmostAlways: return AgreementLabel::kRequired;
    case HumanLabel::kSometimes:
      return strict ? AgreementLabel::kChance : AgreementLabel::kRequired;
    case HumanLabel::kNeedNot: return AgreementLabel::kChance;
  }
  return AgreementLabel::kChance;
}

HrmResult Hrm(const RuleSet& rules, const std::vector<AnnotationRecord>& annotations,
              bool strict) {
  if (annotations.empty()) {
    throw Error(ErrorKind::kEmptyAnnotations, "no annotation records");
  }
  HrmResult result;
  std::size_t hits = 0;
  for (const AnnotationRecord& rec : annotations) {
    if (rec.feature != rules.feature) continue;
    HumanScore s;
    s.triple = rec.triple;
    s.human_label = rec.human_label;
    s.mapped_label = MapHumanLabel(rec.human_label, strict);
    s.tree_label = LabelTriple(rules, rec.triple);
    s.score = s.mapped_label == s.tree_label ? 1 : 0;
    hits += static_cast<std::size_t>(s.score);
    result.details.push_back(std::move(s));
  }
  if (result.details.empty()) {
    throw Error(ErrorKind::kFeatureMismatch,
                "no annotations concern feature '" + rules.feature + "'");
  }
  result.hrm = static_cast<double>(hits) / static_cast<double>(result.details.size());
  return result;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorKind::kLengthMismatch,
                "Pearson needs two vectors of equal length >= 2 (got " +
                    std::to_string(xs.size()) + " and " + std::to_string(ys.size()) + ")");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::kZeroVariance, "Pearson correlation of a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace agreement
