#ifndef AGREEMENT_TRIPLES_H_
#define AGREEMENT_TRIPLES_H_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "agreement/treebank.h"

namespace agreement {

// The six features agreement rules are extracted for by default.
const std::vector<std::string>& DefaultFeatures();

// A dependency edge reduced to <head UPOS, relation, dependent UPOS>.
struct Triple {
  std::string head_pos;
  std::string relation;
  std::string dep_pos;

  bool operator==(const Triple&) const = default;
};

// Canonical order: (relation, head_pos, dep_pos) lexicographically.
bool operator<(const Triple& a, const Triple& b);

std::string ToString(const Triple& t);

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

struct Provenance {
  std::string sent_id;
  std::size_t sentence_index = 0;  // position in Treebank::sentences
  int head_id = 0;
  int dep_id = 0;
};

struct AgreementInstance {
  Triple triple;
  std::string feature;
  std::string head_value;
  std::string dep_value;
  bool agree = false;
  Provenance provenance;
};

using ValueCounts = std::map<std::string, std::size_t>;

struct FeatureDataset {
  std::string feature;
  std::vector<AgreementInstance> instances;
  std::vector<std::string> relation_vocab;
  std::vector<std::string> head_pos_vocab;
  std::vector<std::string> dep_pos_vocab;
  // Global token-occurrence counts of the feature's values; empty when the
  // feature never occurs in the treebank.
  ValueCounts value_marginals;

  bool empty() const { return instances.empty(); }
};

struct TripleCounts {
  std::size_t n_agree = 0;
  std::size_t n_disagree = 0;
  std::size_t total() const { return n_agree + n_disagree; }
};

using TripleTable = std::map<Triple, TripleCounts>;

// One instance per non-root edge whose endpoints both carry `feature`,
// in document order.
FeatureDataset ExtractInstances(const Treebank& treebank,
                                const std::string& feature);

// Counts every token occurrence carrying `feature`. Throws EmptyMarginals
// when no token carries it.
ValueCounts ValueMarginals(const Treebank& treebank, const std::string& feature);

// Agree/disagree counts per distinct triple.
TripleTable CountTriples(const FeatureDataset& dataset);

// Most frequent triples; ties broken by the canonical triple order.
std::vector<Triple> TopKTriples(const FeatureDataset& dataset, std::size_t k);

// Every distinct triple of the dataset in canonical order.
std::vector<Triple> DistinctTriples(const FeatureDataset& dataset);

}  // namespace agreement

#endif  // AGREEMENT_TRIPLES_H_
