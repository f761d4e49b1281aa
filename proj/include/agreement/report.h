#ifndef AGREEMENT_REPORT_H_
#define AGREEMENT_REPORT_H_

// Human-facing artifacts: annotation sheets (TSV) and static HTML rule
// pages with sampled examples and counter-examples.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agreement/evaluation.h"
#include "agreement/serialization.h"
#include "agreement/treebank.h"

namespace agreement {

// Sentence text with the head marked [H:form] and the dependent [D:form].
std::string RenderExample(const Treebank& treebank, const Provenance& where);

std::string HtmlEscape(const std::string& text);

struct SheetOptions {
  std::size_t top_k = 20;
  std::size_t examples = 10;
  std::uint64_t seed = 0;
};

// One row per (feature, top-k training triple) with up to `examples`
// sentences sampled without replacement and an empty label column.
std::string BuildAnnotationSheet(const RulesDocument& rules, const Treebank& train,
                                 const SheetOptions& options);

struct ReportOptions {
  std::size_t examples = 10;
  std::uint64_t seed = 0;
};

EvalReport EvalReportFromJson(const nlohmann::ordered_json& j);
std::vector<EvalReport> EvalDocumentFromJson(const nlohmann::ordered_json& j);

// File name -> page contents: index.html plus one page per feature.
std::map<std::string, std::string> BuildHtmlReport(
    const RulesDocument& rules, const Treebank& train,
    const std::vector<EvalReport>* eval, const ReportOptions& options);

void WriteHtmlReport(const std::filesystem::path& dir,
                     const std::map<std::string, std::string>& pages);

std::string FeaturePageName(const std::string& feature);

}  // namespace agreement

#endif  // AGREEMENT_REPORT_H_
