#pragma once

#include "sugar/kernel.hpp"

#include <cstdint>
#include <optional>

namespace sugar {

struct KsResult {
  Scalar statistic = 0;
  Scalar p_value = 1;
  Index n = 0;
};

/// Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} exp(−2 j² λ²), clamped to [0, 1].
Scalar kolmogorov_q(Scalar lambda);

/// One-sample K-S test against U[lo, hi]. The p-value is Q((√n + 0.12 + 0.11/√n)·D).
KsResult ks_uniform_test(const Vector& v, Scalar lo, Scalar hi);

/// Sample variance of the degrees divided by their mean. Raw degrees grow with
/// N, so only the normalised profile is comparable between X and X ∪ Y.
Scalar degree_variance(const DataMatrix& x, const BandwidthSpec& bw);
/// Sample variance of the raw degree vector.
Scalar raw_degree_variance(const DataMatrix& x, const BandwidthSpec& bw);
/// Unbiased sample variance (n − 1 denominator); 0 for fewer than 2 values.
Scalar sample_variance(const Vector& v);

struct KMeansResult {
  Labels labels;
  Matrix centers;
  Scalar wcss = 0;
  /// WCSS after every Lloyd step of the winning restart.
  std::vector<Scalar> trace;
};

/// k-means++ seeding followed by Lloyd iterations; the best of `restarts` runs
/// by within-cluster sum of squares. Deterministic given the seed.
KMeansResult kmeans(const DataMatrix& x, Index k, std::uint64_t seed, Index restarts = 10, Index max_iter = 300);

/// Fraction of point pairs on which the two partitions agree.
Scalar rand_index(const Labels& a, const Labels& b);

/// Majority vote among the k nearest training points by L² distance (ties in
/// distance go to the lower training index). A tied vote goes to the class of
/// the nearest neighbour among the tied classes.
Labels knn_classify(const LabeledDataset& train, const DataMatrix& test, Index k);

struct ClassificationReport {
  Vector precision;
  Vector recall;
  Scalar acp = 0;
  Scalar acr = 0;
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> confusion;  // rows true, cols predicted
};

/// Macro-averaged precision and recall over classes [0, C). C defaults to one
/// more than the largest label seen. Zero predicted positives give precision 0.
ClassificationReport classification_report(const Labels& y_true, const Labels& y_pred,
                                           std::optional<Index> num_classes = std::nullopt);

/// Oversamples every class below target_ratio × (majority count) with points
/// x + u·(x_nn − x), x_nn among the k nearest same-class neighbours.
/// Synthetic rows are appended after the original ones.
LabeledDataset smote(const LabeledDataset& data, Index k, Scalar target_ratio = 1.0, std::uint64_t seed = 0);

/// ⌈√(n / 5)⌉, at least 2.
Index default_mi_bins(Index n);

/// Plug-in mutual information in nats from an equal-width bins × bins histogram
/// over each variable's range.
Scalar mutual_information(const Vector& u, const Vector& v, Index bins);

/// Fold index per sample for plain k-fold splitting after a seeded shuffle.
std::vector<Index> kfold_assignment(Index n, Index folds, std::uint64_t seed);

}  // namespace sugar
