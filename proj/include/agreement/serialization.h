#ifndef AGREEMENT_SERIALIZATION_H_
#define AGREEMENT_SERIALIZATION_H_

// JSON persistence for rules and evaluation documents. Layouts are
// documented in docs/formats.md; `format_version` gates schema changes.

#include <filesystem>
#include <string>
#include <vector>

#include "agreement/evaluation.h"
#include "agreement/pipeline.h"
#include "json.hpp"

namespace agreement {

inline constexpr const char* kRulesFormatVersion = "agreement-rules/1";
inline constexpr const char* kEvalFormatVersion = "agreement-eval/1";
inline constexpr const char* kHrmFormatVersion = "agreement-hrm/1";

struct FeatureError {
  std::string feature;
  std::string message;
};

struct RulesDocument {
  std::string format_version = kRulesFormatVersion;
  std::string treebank;
  std::uint64_t seed = 0;
  ExtractConfig config;
  std::vector<FeatureRules> features;
  std::vector<FeatureError> errors;

  const FeatureRules* Find(const std::string& feature) const;
};

nlohmann::ordered_json ToJson(const DecisionTree& tree);
DecisionTree TreeFromJson(const nlohmann::ordered_json& j, const std::string& feature);

nlohmann::ordered_json ToJson(const RuleSet& rules);
RuleSet RuleSetFromJson(const nlohmann::ordered_json& j, const std::string& feature);

nlohmann::ordered_json ToJson(const RulesDocument& doc);
RulesDocument RulesDocumentFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json ToJson(const EvalReport& report);

// Serialized text always ends with a newline and is deterministic.
std::string Dump(const nlohmann::ordered_json& j);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

void SaveRules(const RulesDocument& doc, const std::filesystem::path& path);
RulesDocument LoadRules(const std::filesystem::path& path);

}  // namespace agreement

#endif  // AGREEMENT_SERIALIZATION_H_
