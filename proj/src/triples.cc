#include "agreement/triples.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "agreement/error.h"

namespace agreement {

const std::vector<std::string>& DefaultFeatures() {
  static const std::vector<std::string> features = {
      "Gender", "Person", "Number", "Mood", "Case", "Tense"};
  return features;
}

bool operator<(const Triple& a, const Triple& b) {
  return std::tie(a.relation, a.head_pos, a.dep_pos) <
         std::tie(b.relation, b.head_pos, b.dep_pos);
}

std::string ToString(const Triple& t) {
  return "(" + t.relation + ", " + t.head_pos + ", " + t.dep_pos + ")";
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  std::hash<std::string> h;
  std::size_t seed = h(t.relation);
  seed ^= h(t.head_pos) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  seed ^= h(t.dep_pos) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

ValueCounts ValueMarginals(const Treebank& treebank,
                           const std::string& feature) {
  ValueCounts counts;
  for (const Sentence& s : treebank.sentences) {
    for (const Token& t : s.tokens) {
      if (const std::string* v = t.Feature(feature)) ++counts[*v];
    }
  }
  if (counts.empty()) {
    throw Error(ErrorKind::kEmptyMarginals,
                "no token carries feature '" + feature + "'");
  }
  return counts;
}

FeatureDataset ExtractInstances(const Treebank& treebank,
                                const std::string& feature) {
  FeatureDataset ds;
  ds.feature = feature;
  std::set<std::string> relations, heads, deps;

  for (std::size_t si = 0; si < treebank.sentences.size(); ++si) {
    const Sentence& s = treebank.sentences[si];
    for (const Token& dep : s.tokens) {
      const std::string* dep_value = dep.Feature(feature);
      if (dep_value) ++ds.value_marginals[*dep_value];
      if (dep.head == 0 || dep_value == nullptr) continue;
      const Token& head = s.at(dep.head);
      const std::string* head_value = head.Feature(feature);
      if (head_value == nullptr) continue;

      AgreementInstance inst;
      inst.triple = Triple{head.upos, dep.deprel, dep.upos};
      inst.feature = feature;
      inst.head_value = *head_value;
      inst.dep_value = *dep_value;
      inst.agree = *head_value == *dep_value;
      inst.provenance = Provenance{s.sent_id, si, head.id, dep.id};
      relations.insert(inst.triple.relation);
      heads.insert(inst.triple.head_pos);
      deps.insert(inst.triple.dep_pos);
      ds.instances.push_back(std::move(inst));
    }
  }
  ds.relation_vocab.assign(relations.begin(), relations.end());
  ds.head_pos_vocab.assign(heads.begin(), heads.end());
  ds.dep_pos_vocab.assign(deps.begin(), deps.end());
  return ds;
}

TripleTable CountTriples(const FeatureDataset& dataset) {
  TripleTable table;
  for (const AgreementInstance& inst : dataset.instances) {
    TripleCounts& c = table[inst.triple];
    (inst.agree ? c.n_agree : c.n_disagree) += 1;
  }
  return table;
}

std::vector<Triple> TopKTriples(const FeatureDataset& dataset, std::size_t k) {
  if (k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "top-k requires k >= 1");
  }
  const TripleTable table = CountTriples(dataset);
  std::vector<std::pair<Triple, std::size_t>> ranked;
  ranked.reserve(table.size());
  for (const auto& [t, c] : table) ranked.emplace_back(t, c.total());
  // The table is already in canonical order, so a stable sort on count
  // alone applies the tie rule.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  std::vector<Triple> out;
  out.reserve(ranked.size());
  for (auto& [t, n] : ranked) out.push_back(std::move(t));
  return out;
}

std::vector<Triple> DistinctTriples(const FeatureDataset& dataset) {
  std::vector<Triple> out;
  for (const auto& [t, c] : CountTriples(dataset)) out.push_back(t);
  return out;
}

}  // namespace agreement
