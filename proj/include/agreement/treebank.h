#ifndef AGREEMENT_TREEBANK_H_
#define AGREEMENT_TREEBANK_H_

// In-memory model of a CoNLL-U dependency treebank and its reader.
//
// Multiword-token ranges ("3-4") and empty nodes ("3.1") are dropped while
// reading, so every Sentence holds tokens with ids 1..n and heads in 0..n.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agreement {

using FeatureBundle = std::map<std::string, std::string>;

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::optional<std::string> xpos;
  FeatureBundle feats;
  int head = 0;
  std::string deprel;
  std::optional<std::string> deps;
  std::optional<std::string> misc;

  // Value of `feature`, or nullptr when the token does not carry it.
  const std::string* Feature(const std::string& feature) const {
    auto it = feats.find(feature);
    return it == feats.end() ? nullptr : &it->second;
  }
};

struct Sentence {
  std::string sent_id;
  std::optional<std::string> text;
  std::vector<Token> tokens;

  // 1-based lookup; id must be in [1, tokens.size()].
  const Token& at(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::string source_path;
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;
};

// Parses a FEATS column. "_" is the empty bundle; multi-valued entries
// ("Case=Nom,Acc") keep the verbatim value string.
FeatureBundle ParseFeats(std::string_view raw);

// Serializes a bundle in sorted-name "A=x|B=y" form; the empty bundle is "_".
std::string FormatFeats(const FeatureBundle& feats);

Treebank ParseConllu(std::istream& in, std::string source_path = "");
Treebank ParseConlluFile(const std::filesystem::path& path);
Treebank ParseConlluString(std::string_view text, std::string source_path = "");

// True iff `bytes` is well-formed UTF-8.
bool IsValidUtf8(std::string_view bytes);

}  // namespace agreement

#endif  // AGREEMENT_TREEBANK_H_
