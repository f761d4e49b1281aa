#include "agreement/pipeline.h"

#include <future>

#include "agreement/error.h"

namespace agreement {

std::string_view MarginalModeName(MarginalMode mode) {
  return mode == MarginalMode::kGlobal ? "global" : "per-leaf";
}

MarginalMode ParseMarginalMode(std::string_view name) {
  if (name == "global") return MarginalMode::kGlobal;
  if (name == "per-leaf") return MarginalMode::kPerLeaf;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown marginal mode '" + std::string(name) + "'");
}

FeatureRules ExtractFeatureRules(const FeatureDataset& train,
                                 const FeatureDataset* dev,
                                 const ExtractConfig& config) {
  FeatureRules out;
  out.feature = train.feature;
  out.marginals = train.value_marginals;
  out.training_size = train.instances.size();
  for (const AgreementInstance& inst : train.instances) out.n_agree += inst.agree ? 1 : 0;

  if (train.empty()) {
    out.absent = true;
    out.rules = ChanceBaselineRules(train.feature);
    return out;
  }
  if (!train.value_marginals.empty()) {
    out.chance = ChanceAgreementProb(train.value_marginals, train.feature);
  }
  if (config.baseline) {
    out.rules = ChanceBaselineRules(train.feature, out.n_agree,
                                    out.training_size - out.n_agree);
    AttachExamples(out.rules, train);
    return out;
  }

  const HyperGrid grid = config.depth_range ? config.grid.WithDepthRange() : config.grid;
  GridSearchResult search = GridSearch(train, dev, grid, config.seed, config.metric);
  out.hyperparams = search.best;
  out.grid_scores = std::move(search.scores);

  if (config.marginals == MarginalMode::kPerLeaf) {
    out.verdicts = LabelLeavesPerLeafMarginals(search.tree, train, config.labeling);
  } else {
    if (!out.chance && config.labeling.mode == ThresholdMode::kStatistical) {
      throw Error(ErrorKind::kEmptyMarginals,
                  "no marginals for feature '" + train.feature + "'");
    }
    out.verdicts = LabelLeaves(search.tree, out.chance.value_or(ChanceModel{}),
                               config.labeling);
  }
  out.rules = MergeRules(search.tree, out.verdicts, config.labeling.mode);
  AttachExamples(out.rules, train);
  out.tree = std::move(search.tree);
  return out;
}

FeatureRules ExtractFeatureRules(const Treebank& train, const Treebank* dev,
                                 const std::string& feature,
                                 const ExtractConfig& config) {
  const FeatureDataset train_ds = ExtractInstances(train, feature);
  if (dev) {
    const FeatureDataset dev_ds = ExtractInstances(*dev, feature);
    return ExtractFeatureRules(train_ds, &dev_ds, config);
  }
  return ExtractFeatureRules(train_ds, nullptr, config);
}

std::vector<FeatureOutcome> ExtractAll(const Treebank& train, const Treebank* dev,
                                       const std::vector<std::string>& features,
                                       const ExtractConfig& config) {
  std::vector<std::future<FeatureOutcome>> pending;
  pending.reserve(features.size());
  for (const std::string& feature : features) {
    pending.push_back(std::async(std::launch::async, [&train, dev, feature, &config] {
      FeatureOutcome outcome;
      try {
        outcome.rules = ExtractFeatureRules(train, dev, feature, config);
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
      return outcome;
    }));
  }
  std::vector<FeatureOutcome> results;
  results.reserve(pending.size());
  for (auto& f : pending) results.push_back(f.get());
  return results;
}

}  // namespace agreement
