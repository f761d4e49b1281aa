#ifndef AGREEMENT_SYNTHETIC_H_
#define AGREEMENT_SYNTHETIC_H_

// Synthetic treebanks with planted required-agreement triples. Every other
// edge draws head and dependent values independently from the feature
// marginals, so its expected agreement is the chance probability.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "agreement/rule_labeling.h"
#include "agreement/treebank.h"
#include "agreement/triples.h"

namespace agreement {

inline constexpr const char* kWildcard = "*";

struct FeatureSpec {
  std::string name;
  std::vector<std::string> values;
  std::vector<double> probs;
};

// A triple whose slots may be "*".
struct TriplePattern {
  std::string head_pos = kWildcard;
  std::string relation = kWildcard;
  std::string dep_pos = kWildcard;

  bool Matches(const Triple& t) const;
};

struct PlantedGrammar {
  std::vector<FeatureSpec> features;
  // Applies to every feature.
  std::vector<TriplePattern> required_rules;
  std::vector<std::string> relations;
  std::vector<std::string> head_pos;
  std::vector<std::string> dep_pos;
  // Optional edge inventory. When non-empty, edges are drawn uniformly from
  // it and it is the triple space for recovery scoring; otherwise the full
  // product of the vocabularies is used.
  std::vector<Triple> triples;
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
};

// Throws InvalidGrammar when the grammar violates its invariants.
void ValidateGrammar(const PlantedGrammar& grammar);

PlantedGrammar LoadGrammarJson(const std::filesystem::path& path);
PlantedGrammar ParseGrammarJson(const std::string& text);

bool IsRequired(const PlantedGrammar& grammar, const Triple& t);

// Triple space: the inventory if declared, otherwise the vocabulary product.
std::vector<Triple> TripleSpace(const PlantedGrammar& grammar);

// Each sentence holds a featureless artificial root token plus
// `edges_per_sentence` head/dependent token pairs; head tokens attach to the
// artificial root.
Treebank Generate(const PlantedGrammar& grammar, std::size_t n_sentences,
                  std::size_t edges_per_sentence);

void WriteConllu(const Treebank& treebank, std::ostream& out);

struct RecoveryScore {
  std::optional<double> precision;  // unset without predicted positives
  std::optional<double> recall;     // unset without planted positives
};

RecoveryScore ScoreRecovery(const PlantedGrammar& grammar, const RuleSet& extracted);

}  // namespace agreement

#endif  // AGREEMENT_SYNTHETIC_H_
