#include "sugar/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sugar {

LabeledDataset sugar_augment(const LabeledDataset& data, const SugarConfig& cfg, Index* generated) {
  const AugmentedDataset aug = sugar_iterate(data.data(), cfg);
  if (generated) *generated = aug.generated.rows();
  if (aug.generated.rows() == 0) return data;
  Labels labels;
  labels.reserve(aug.origin.size());
  for (Index o : aug.origin) labels.push_back(data.labels()[static_cast<std::size_t>(o)]);
  return data.append(aug.generated, labels);
}

LabeledDataset sugar_augment_per_class(const LabeledDataset& data, const SugarConfig& cfg, Index* generated) {
  LabeledDataset out = data;
  Index total = 0;
  for (int c = 0; c < data.num_classes(); ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < data.size(); ++i) {
      if (data.labels()[static_cast<std::size_t>(i)] == c) members.push_back(i);
    }
    SugarConfig round = cfg;
    round.seed = cfg.seed + static_cast<std::uint64_t>(c);
    const AugmentedDataset aug = sugar_iterate(data.data().select_rows(members), round);
    if (aug.generated.rows() == 0) continue;
    total += aug.generated.rows();
    out = out.append(aug.generated, Labels(static_cast<std::size_t>(aug.generated.rows()), c));
  }
  if (generated) *generated = total;
  return out;
}

std::vector<Index> class_folds(const LabeledDataset& data, Index folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("class_folds: need at least 2 folds");
  const std::vector<Index> counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < folds) {
      throw std::invalid_argument("class_folds: fold count " + std::to_string(folds) + " exceeds the support (" +
                                  std::to_string(counts[c]) + ") of class " + std::to_string(c));
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(data.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> next(counts.size(), 0);
  std::vector<Index> fold(order.size());
  for (Index i : order) {
    const auto c = static_cast<std::size_t>(data.labels()[static_cast<std::size_t>(i)]);
    fold[static_cast<std::size_t>(i)] = next[c]++ % folds;
  }
  return fold;
}

ClassifyOutcome classify_experiment(const LabeledDataset& data, const ClassifyOptions& opt) {
  const std::vector<Index> fold = class_folds(data, opt.folds, opt.seed);
  const Index n = data.size();
  Labels pred_orig(static_cast<std::size_t>(n));
  Labels pred_smote(static_cast<std::size_t>(n));
  Labels pred_sugar(static_cast<std::size_t>(n));
  ClassifyOutcome out;
  for (Index f = 0; f < opt.folds; ++f) {
    std::vector<Index> train_idx;
    std::vector<Index> test_idx;
    for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? test_idx : train_idx).push_back(i);
    const LabeledDataset train = data.select_rows(train_idx);
    const DataMatrix test = data.data().select_rows(test_idx);

    const LabeledDataset with_smote = smote(train, opt.smote_k, opt.smote_ratio, opt.seed + static_cast<std::uint64_t>(f));
    SugarConfig cfg = opt.sugar;
    cfg.seed = opt.sugar.seed + static_cast<std::uint64_t>(f);
    Index generated = 0;
    const LabeledDataset with_sugar =
        opt.per_class ? sugar_augment_per_class(train, cfg, &generated) : sugar_augment(train, cfg, &generated);
    out.smote_generated += with_smote.size() - train.size();
    out.sugar_generated += generated;

    const Labels a = knn_classify(train, test, std::min(opt.k_nn, train.size()));
    const Labels b = knn_classify(with_smote, test, std::min(opt.k_nn, with_smote.size()));
    const Labels c = knn_classify(with_sugar, test, std::min(opt.k_nn, with_sugar.size()));
    for (std::size_t q = 0; q < test_idx.size(); ++q) {
      const auto i = static_cast<std::size_t>(test_idx[q]);
      pred_orig[i] = a[q];
      pred_smote[i] = b[q];
      pred_sugar[i] = c[q];
    }
  }
  const Index classes = data.num_classes();
  out.original = classification_report(data.labels(), pred_orig, classes);
  out.smote = classification_report(data.labels(), pred_smote, classes);
  out.sugar = classification_report(data.labels(), pred_sugar, classes);
  return out;
}

ClusterOutcome cluster_experiment(const LabeledDataset& data, const ClusterOptions& opt) {
  const DataMatrix& x = data.data();
  const AugmentedDataset aug = sugar_iterate(x, opt.sugar);
  ClusterOutcome out;
  out.generated = aug.generated.rows();

  out.ri_original = rand_index(data.labels(), kmeans(x, opt.k, opt.seed, opt.restarts).labels);
  const Labels with_sugar = kmeans(aug.combined, opt.k, opt.seed, opt.restarts).labels;
  out.ri_sugar = rand_index(data.labels(), Labels(with_sugar.begin(), with_sugar.begin() + x.rows()));

  out.components_original = connected_components(x, opt.graph_bandwidth, opt.threshold).count;
  out.components_sugar = connected_components(aug.combined, opt.graph_bandwidth, opt.threshold).count;
  return out;
}

}  // namespace sugar
