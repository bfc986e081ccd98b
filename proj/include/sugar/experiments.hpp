#pragma once

#include "sugar/pipeline.hpp"
#include "sugar/spectral.hpp"

namespace sugar {

/// Training-set augmentation by SUGAR. Generated points take the label of the
/// point they were drawn around.
LabeledDataset sugar_augment(const LabeledDataset& data, const SugarConfig& cfg, Index* generated = nullptr);

/// SUGAR run on each class separately; every generated point takes the label
/// of the class it was generated for.
LabeledDataset sugar_augment_per_class(const LabeledDataset& data, const SugarConfig& cfg, Index* generated = nullptr);

struct ClassifyOptions {
  Index folds = 10;
  Index k_nn = 5;
  Index smote_k = 5;
  Scalar smote_ratio = 1.0;
  SugarConfig sugar;
  /// Augment each class on its own instead of the whole training set.
  bool per_class = false;
  std::uint64_t seed = 0;
};

/// k-fold k-NN on original, SMOTE-augmented and SUGAR-augmented training sets.
/// Folds are drawn from the original points only; predictions over all folds
/// are pooled into one report per method.
struct ClassifyOutcome {
  ClassificationReport original;
  ClassificationReport smote;
  ClassificationReport sugar;
  Index smote_generated = 0;
  Index sugar_generated = 0;
};

/// Throws std::invalid_argument when a class has fewer points than folds.
ClassifyOutcome classify_experiment(const LabeledDataset& data, const ClassifyOptions& opt);

/// Fold of every point: a seeded shuffle, then classes dealt round-robin, so
/// each fold holds every class with at least `folds` members.
std::vector<Index> class_folds(const LabeledDataset& data, Index folds, std::uint64_t seed);

struct ClusterOptions {
  Index k = 5;
  Index restarts = 10;
  /// Graph for component counts: affinity >= threshold under this bandwidth,
  /// resolved separately on the original and the augmented set.
  BandwidthSpec graph_bandwidth = BandwidthSpec::maxmin(2.0);
  Scalar threshold = 0.5;
  SugarConfig sugar;
  std::uint64_t seed = 0;
};

/// Rand Index of the original points' k-means labels against the truth, with
/// and without SUGAR points in the clustered set, plus component counts.
struct ClusterOutcome {
  Scalar ri_original = 0;
  Scalar ri_sugar = 0;
  Index components_original = 0;
  Index components_sugar = 0;
  Index generated = 0;
};

ClusterOutcome cluster_experiment(const LabeledDataset& data, const ClusterOptions& opt);

}  // namespace sugar
