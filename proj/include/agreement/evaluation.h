#ifndef AGREEMENT_EVALUATION_H_
#define AGREEMENT_EVALUATION_H_

// Automated rule metric against held-out data, the all-chance baseline,
// human rule metric against expert annotations, and Pearson correlation.

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agreement/rule_labeling.h"
#include "agreement/triples.h"

namespace agreement {

inline constexpr double kDefaultTau = 0.95;

enum class HumanLabel { kAlmostAlways, kSometimes, kNeedNot };

std::string_view HumanLabelName(HumanLabel label);
HumanLabel ParseHumanLabel(std::string_view name);

struct AnnotationRecord {
  std::string feature;
  Triple triple;
  HumanLabel human_label = HumanLabel::kNeedNot;
};

// Reads a TSV whose header names at least feature, relation, head_pos,
// dep_pos and label (extra columns are ignored, so a completed annotation
// sheet can be read back directly). Rows with an empty label are skipped.
std::vector<AnnotationRecord> ReadAnnotationsTsv(std::istream& in);

struct EmpiricalAgreement {
  std::size_t n_test = 0;
  std::size_t n_agree = 0;
  // Unset when the triple does not occur in the test data.
  std::optional<double> q;
};

EmpiricalAgreement ComputeEmpiricalAgreement(const FeatureDataset& test,
                                             const Triple& triple);

struct TripleVerdict {
  Triple triple;
  std::size_t n_test = 0;
  double q = 0.0;
  AgreementLabel test_label = AgreementLabel::kChance;
  AgreementLabel tree_label = AgreementLabel::kChance;
  int score = 0;
};

struct HumanScore {
  Triple triple;
  HumanLabel human_label = HumanLabel::kNeedNot;
  AgreementLabel mapped_label = AgreementLabel::kChance;
  AgreementLabel tree_label = AgreementLabel::kChance;
  int score = 0;
};

struct EvalReport {
  std::string feature;
  double arm = 0.0;
  double baseline_arm = 0.0;
  double tau = kDefaultTau;
  std::vector<TripleVerdict> verdicts;
  std::optional<double> hrm;
  std::vector<HumanScore> hrm_details;
};

// Scores every listed triple present in `test`; absent triples are skipped.
// Also fills baseline_arm over the same evaluated triples. Throws
// NoEvaluableTriples when nothing remains.
EvalReport Arm(const RuleSet& rules, const FeatureDataset& test,
               const std::vector<Triple>& triples, double tau = kDefaultTau);

// As Arm with every triple labeled Chance.
EvalReport BaselineArm(const FeatureDataset& test,
                       const std::vector<Triple>& triples, double tau = kDefaultTau);

struct HrmResult {
  double hrm = 0.0;
  std::vector<HumanScore> details;
};

AgreementLabel MapHumanLabel(HumanLabel label, bool strict);

// Uses the records for the rule set's feature. Throws EmptyAnnotations on
// an empty list and FeatureMismatch when none concern the feature.
HrmResult Hrm(const RuleSet& rules, const std::vector<AnnotationRecord>& annotations,
              bool strict = true);

// Sample Pearson correlation. Throws LengthMismatch unless both have the
// same size >= 2 and ZeroVariance when either vector is constant.
double Pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace agreement

#endif  // AGREEMENT_EVALUATION_H_
