#include "agreement/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "agreement/error.h"
#include "agreement/rng.h"
#include "json.hpp"

namespace agreement {
namespace {

using nlohmann::json;

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::kInvalidGrammar, message);
}

bool SlotOk(const std::string& value, const std::vector<std::string>& vocab) {
  return value == kWildcard ||
         std::find(vocab.begin(), vocab.end(), value) != vocab.end();
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Triple TripleFromJson(const json& j) {
  return Triple{j.at("head_pos").get<std::string>(), j.at("relation").get<std::string>(),
                j.at("dep_pos").get<std::string>()};
}

// Draws a value index different from `avoid` from the marginals restricted
// to the remaining values.
std::size_t DrawOther(Rng& rng, const std::vector<double>& probs, std::size_t avoid) {
  const double mass = 1.0 - probs[avoid];
  double u = rng.Uniform() * mass;
  std::size_t last = avoid;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i == avoid) continue;
    last = i;
    if (u < probs[i]) return i;
    u -= probs[i];
  }
  return last;
}

}  // namespace

bool TriplePattern::Matches(const Triple& t) const {
  return (head_pos == kWildcard || head_pos == t.head_pos) &&
         (relation == kWildcard || relation == t.relation) &&
         (dep_pos == kWildcard || dep_pos == t.dep_pos);
}

void ValidateGrammar(const PlantedGrammar& g) {
  Require(!g.features.empty(), "grammar declares no features");
  Require(g.noise_rate >= 0.0 && g.noise_rate < 0.5, "noise_rate must lie in [0, 0.5)");
  for (const FeatureSpec& f : g.features) {
    Require(!f.name.empty(), "feature without a name");
    Require(!f.values.empty() && f.values.size() == f.probs.size(),
            "feature '" + f.name + "' needs one probability per value");
    Require(std::set<std::string>(f.values.begin(), f.values.end()).size() == f.values.size(),
            "feature '" + f.name + "' repeats a value");
    double sum = 0.0;
    for (double p : f.probs) {
      Require(p > 0.0, "feature '" + f.name + "' has a non-positive probability");
      sum += p;
    }
    Require(std::abs(sum - 1.0) < 1e-9, "marginals of '" + f.name + "' do not sum to 1");
  }
  if (g.triples.empty()) {
    Require(!g.relations.empty() && !g.head_pos.empty() && !g.dep_pos.empty(),
            "grammar needs non-empty vocabularies or a triple inventory");
  }
  for (const Triple& t : g.triples) {
    Require(t.relation != kWildcard && t.head_pos != kWildcard && t.dep_pos != kWildcard,
            "inventory triples must be concrete");
    Require(SlotOk(t.relation, g.relations) && SlotOk(t.head_pos, g.head_pos) &&
                SlotOk(t.dep_pos, g.dep_pos),
            "inventory triple " + ToString(t) + " uses an undeclared symbol");
  }
  for (const TriplePattern& r : g.required_rules) {
    Require(SlotOk(r.relation, g.relations) && SlotOk(r.head_pos, g.head_pos) &&
                SlotOk(r.dep_pos, g.dep_pos),
            "required rule (" + r.relation + ", " + r.head_pos + ", " + r.dep_pos +
                ") uses an undeclared symbol");
  }
}

PlantedGrammar ParseGrammarJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    PlantedGrammar g;
    for (const json& f : j.at("features")) {
      FeatureSpec spec;
      spec.name = f.at("name").get<std::string>();
      spec.values = f.at("values").get<std::vector<std::string>>();
      spec.probs = f.at("probs").get<std::vector<double>>();
      g.features.push_back(std::move(spec));
    }
    for (const json& r : j.value("required_rules", json::array())) {
      TriplePattern p;
      p.relation = r.value("relation", std::string(kWildcard));
      p.head_pos = r.value("head_pos", std::string(kWildcard));
      p.dep_pos = r.value("dep_pos", std::string(kWildcard));
      g.required_rules.push_back(std::move(p));
    }
    for (const json& t : j.value("triples", json::array())) g.triples.push_back(TripleFromJson(t));
    g.relations = j.value("relations", std::vector<std::string>{});
    g.head_pos = j.value("head_pos", std::vector<std::string>{});
    g.dep_pos = j.value("dep_pos", std::vector<std::string>{});
    // An inventory alone declares its own vocabularies.
    for (const Triple& t : g.triples) {
      auto add = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
      };
      if (!j.contains("relations")) add(g.relations, t.relation);
      if (!j.contains("head_pos")) add(g.head_pos, t.head_pos);
      if (!j.contains("dep_pos")) add(g.dep_pos, t.dep_pos);
    }
    g.noise_rate = j.value("noise_rate", 0.0);
    g.seed = j.value("seed", std::uint64_t{0});
    ValidateGrammar(g);
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidGrammar, e.what());
  }
}

PlantedGrammar LoadGrammarJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseGrammarJson(ss.str());
}

bool IsRequired(const PlantedGrammar& grammar, const Triple& t) {
  return std::any_of(grammar.required_rules.begin(), grammar.required_rules.end(),
                     [&](const TriplePattern& p) { return p.Matches(t); });
}

std::vector<Triple> TripleSpace(const PlantedGrammar& g) {
  if (!g.triples.empty()) return g.triples;
  std::vector<Triple> space;
  for (const std::string& r : g.relations) {
    for (const std::string& h : g.head_pos) {
      for (const std::string& d : g.dep_pos) space.push_back(Triple{h, r, d});
    }
  }
  return space;
}

Treebank Generate(const PlantedGrammar& grammar, std::size_t n_sentences,
                  std::size_t edges_per_sentence) {
  ValidateGrammar(grammar);
  Require(edges_per_sentence >= 1, "sentences need at least one edge");
  const std::vector<Triple> space = TripleSpace(grammar);
  Rng rng(grammar.seed);

  Treebank tb;
  tb.source_path = "synthetic";
  for (std::size_t s = 0; s < n_sentences; ++s) {
    Sentence sent;
    sent.sent_id = "synthetic-" + std::to_string(s + 1);
    Token root;
    root.id = 1;
    root.form = "<root>";
    root.lemma = "<root>";
    root.upos = "X";
    root.head = 0;
    root.deprel = "root";
    sent.tokens.push_back(root);

    for (std::size_t e = 0; e < edges_per_sentence; ++e) {
      const Triple& t = space[rng.Below(space.size())];
      const bool required = IsRequired(grammar, t);
      Token head, dep;
      head.id = static_cast<int>(sent.tokens.size()) + 1;
      dep.id = head.id + 1;
      head.upos = t.head_pos;
      head.head = 1;
      head.deprel = "dep";
      dep.upos = t.dep_pos;
      dep.head = head.id;
      dep.deprel = t.relation;
      std::string head_form = Lower(t.head_pos), dep_form = Lower(t.dep_pos);
      for (const FeatureSpec& f : grammar.features) {
        const std::size_t hv = rng.Categorical(f.probs);
        std::size_t dv;
        if (required) {
          const bool violate = f.values.size() > 1 && rng.Uniform() < grammar.noise_rate;
          dv = violate ? DrawOther(rng, f.probs, hv) : hv;
        } else {
          dv = rng.Categorical(f.probs);
        }
        head.feats[f.name] = f.values[hv];
        dep.feats[f.name] = f.values[dv];
        head_form += "_" + Lower(f.values[hv]);
        dep_form += "_" + Lower(f.values[dv]);
      }
      head.form = head.lemma = head_form;
      dep.form = dep.lemma = dep_form;
      sent.tokens.push_back(std::move(head));
      sent.tokens.push_back(std::move(dep));
    }
    tb.token_count += sent.tokens.size();
    tb.sentences.push_back(std::move(sent));
  }
  tb.sentence_count = tb.sentences.size();
  return tb;
}

void WriteConllu(const Treebank& treebank, std::ostream& out) {
  auto opt = [](const std::optional<std::string>& s) { return s ? *s : std::string("_"); };
  for (const Sentence& s : treebank.sentences) {
    out << "# sent_id = " << s.sent_id << "\n";
    if (s.text) out << "# text = " << *s.text << "\n";
    for (const Token& t : s.tokens) {
      out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
          << opt(t.xpos) << '\t' << FormatFeats(t.feats) << '\t' << t.head << '\t'
          << t.deprel << '\t' << opt(t.deps) << '\t' << opt(t.misc) << "\n";
    }
    out << "\n";
  }
}

RecoveryScore ScoreRecovery(const PlantedGrammar& grammar, const RuleSet& extracted) {
  const bool declared =
      std::any_of(grammar.features.begin(), grammar.features.end(),
                  [&](const FeatureSpec& f) { return f.name == extracted.feature; });
  if (!declared) {
    throw Error(ErrorKind::kFeatureMismatch,
                "grammar does not declare feature '" + extracted.feature + "'");
  }
  std::size_t tp = 0, fp = 0, planted = 0;
  for (const Triple& t : TripleSpace(grammar)) {
    const bool truth = IsRequired(grammar, t);
    const bool predicted = LabelTriple(extracted, t) == AgreementLabel::kRequired;
    planted += truth ? 1 : 0;
    if (predicted && truth) ++tp;
    if (predicted && !truth) ++fp;
  }
  RecoveryScore r;
  if (tp + fp > 0) r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (planted > 0) r.recall = static_cast<double>(tp) / static_cast<double>(planted);
  return r;
}

}  // namespace agreement
