#include "sugar/eval.hpp"
#include "sugar/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

namespace sugar {

Scalar kolmogorov_q(Scalar lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 1.18) {
    // Dual theta-function series; the alternating one converges slowly here.
    const Scalar y = std::exp(-std::numbers::pi * std::numbers::pi / (8 * lambda * lambda));
    const Scalar y8 = std::pow(y, 8);
    const Scalar cdf = std::sqrt(2 * std::numbers::pi) / lambda * y * (1 + y8 * (1 + y8 * y8 * (1 + y8 * y8 * y8)));
    return std::clamp(1 - cdf, 0.0, 1.0);
  }
  Scalar sum = 0;
  for (int j = 1; j <= 1000; ++j) {
    const Scalar term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-10) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

KsResult ks_uniform_test(const Vector& v, Scalar lo, Scalar hi) {
  if (v.size() < 1) throw std::invalid_argument("ks_uniform_test: need at least one value");
  if (!(hi > lo)) throw std::invalid_argument("ks_uniform_test: range width must be > 0");
  std::vector<Scalar> s(v.begin(), v.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= lo && s[i] <= hi)) {
      throw std::invalid_argument("ks_uniform_test: value " + std::to_string(i) + " outside the range");
    }
  }
  std::sort(s.begin(), s.end());
  const Scalar n = static_cast<Scalar>(s.size());
  Scalar d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Scalar f = (s[i] - lo) / (hi - lo);
    d = std::max({d, static_cast<Scalar>(i + 1) / n - f, f - static_cast<Scalar>(i) / n});
  }
  const Scalar root = std::sqrt(n);
  KsResult out;
  out.statistic = d;
  out.n = v.size();
  out.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
  return out;
}

Scalar sample_variance(const Vector& v) {
  if (v.size() < 2) return 0.0;
  const Scalar mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<Scalar>(v.size() - 1);
}

Scalar degree_variance(const DataMatrix& x, const BandwidthSpec& bw) {
  if (x.rows() < 2) throw std::invalid_argument("degree_variance: need N >= 2");
  const Vector d = degree_profile(x, bw).degrees;
  return sample_variance(d / d.mean());
}

Scalar raw_degree_variance(const DataMatrix& x, const BandwidthSpec& bw) {
  if (x.rows() < 2) throw std::invalid_argument("degree_variance: need N >= 2");
  return sample_variance(degree_profile(x, bw).degrees);
}

namespace {

struct LloydRun {
  Labels labels;
  Matrix centers;
  Scalar wcss = 0;
  std::vector<Scalar> trace;
};

Scalar assign(const PointMatrix& x, const Matrix& centers, Labels& labels) {
  Scalar total = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    Index best = 0;
    Scalar best_d = std::numeric_limits<Scalar>::infinity();
    for (Index c = 0; c < centers.rows(); ++c) {
      const Scalar d = (x.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    total += best_d;
  }
  return total;
}

LloydRun lloyd(const PointMatrix& x, Index k, std::mt19937_64& rng, Index max_iter) {
  const Index n = x.rows();
  LloydRun run;
  run.centers.resize(k, x.cols());
  std::uniform_int_distribution<Index> first(0, n - 1);
  run.centers.row(0) = x.row(first(rng));
  Vector nearest(n);
  for (Index i = 0; i < n; ++i) nearest(i) = (x.row(i) - run.centers.row(0)).squaredNorm();
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
  for (Index c = 1; c < k; ++c) {
    const Scalar total = nearest.sum();
    Index pick = 0;
    if (total > 0) {
      const Scalar target = unif(rng) * total;
      Scalar acc = 0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += nearest(i);
        if (acc > target && nearest(i) > 0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<Index>(0, n - 1)(rng);
    }
    run.centers.row(c) = x.row(pick);
    for (Index i = 0; i < n; ++i) nearest(i) = std::min(nearest(i), (x.row(i) - run.centers.row(c)).squaredNorm());
  }

  run.labels.assign(static_cast<std::size_t>(n), 0);
  run.wcss = assign(x, run.centers, run.labels);
  run.trace.push_back(run.wcss);
  for (Index it = 0; it < max_iter; ++it) {
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = run.labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    // An emptied cluster keeps its previous centre.
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        run.centers.row(c) = sums.row(c) / static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
      }
    }
    const Labels before = run.labels;
    run.wcss = assign(x, run.centers, run.labels);
    run.trace.push_back(run.wcss);
    if (run.labels == before) break;
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const DataMatrix& x, Index k, std::uint64_t seed, Index restarts, Index max_iter) {
  if (k < 1 || k > x.rows()) throw std::invalid_argument("kmeans: k must be in [1, N]");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  std::mt19937_64 rng(seed);
  LloydRun best;
  bool have = false;
  for (Index r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(x.values(), k, rng, max_iter);
    if (!have || run.wcss < best.wcss) {
      best = std::move(run);
      have = true;
    }
  }
  KMeansResult out;
  out.labels = std::move(best.labels);
  out.centers = std::move(best.centers);
  out.wcss = best.wcss;
  out.trace = std::move(best.trace);
  return out;
}

Scalar rand_index(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_index: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("rand_index: need n >= 2");
  // Pair counts from the contingency table; exact in integer arithmetic.
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> ca;
  std::map<int, long long> cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  auto pairs = [](long long m) { return m * (m - 1) / 2; };
  long long both = 0;
  long long same_a = 0;
  long long same_b = 0;
  for (const auto& [key, m] : joint) both += pairs(m);
  for (const auto& [key, m] : ca) same_a += pairs(m);
  for (const auto& [key, m] : cb) same_b += pairs(m);
  const long long total = pairs(static_cast<long long>(a.size()));
  const long long agree = total - same_a - same_b + 2 * both;
  return static_cast<Scalar>(agree) / static_cast<Scalar>(total);
}

Labels knn_classify(const LabeledDataset& train, const DataMatrix& test, Index k) {
  const Index n = train.size();
  if (n == 0) throw std::invalid_argument("knn_classify: empty training set");
  if (k < 1 || k > n) throw std::invalid_argument("knn_classify: k must be in [1, train size]");
  if (test.cols() != train.data().cols()) throw std::invalid_argument("knn_classify: dimension mismatch");
  const auto& tx = train.data().values();
  const Labels& ty = train.labels();
  const Index classes = train.num_classes();
  Labels out(static_cast<std::size_t>(test.rows()));
  parallel_for(static_cast<std::size_t>(test.rows()), [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<Scalar, Index>> dist(static_cast<std::size_t>(n));
    std::vector<Index> votes(static_cast<std::size_t>(classes));
    for (std::size_t q = begin; q < end; ++q) {
      for (Index j = 0; j < n; ++j) {
        dist[static_cast<std::size_t>(j)] = {(tx.row(j) - test.values().row(static_cast<Index>(q))).squaredNorm(), j};
      }
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      std::fill(votes.begin(), votes.end(), 0);
      for (Index c = 0; c < k; ++c) ++votes[static_cast<std::size_t>(ty[static_cast<std::size_t>(dist[static_cast<std::size_t>(c)].second)])];
      const Index top = *std::max_element(votes.begin(), votes.end());
      // Neighbours are in distance order, so the first tied class met is the nearest.
      for (Index c = 0; c < k; ++c) {
        const int label = ty[static_cast<std::size_t>(dist[static_cast<std::size_t>(c)].second)];
        if (votes[static_cast<std::size_t>(label)] == top) {
          out[q] = label;
          break;
        }
      }
    }
  });
  return out;
}

ClassificationReport classification_report(const Labels& y_true, const Labels& y_pred,
                                           std::optional<Index> num_classes) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("classification_report: length mismatch");
  int top = -1;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_pred[i] < 0) throw std::invalid_argument("classification_report: negative label");
    top = std::max({top, y_true[i], y_pred[i]});
  }
  const Index c = num_classes ? *num_classes : static_cast<Index>(top + 1);
  if (top >= c) throw std::invalid_argument("classification_report: label exceeds class count");
  ClassificationReport r;
  r.confusion = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>::Zero(c, c);
  for (std::size_t i = 0; i < y_true.size(); ++i) ++r.confusion(y_true[i], y_pred[i]);
  r.precision = Vector::Zero(c);
  r.recall = Vector::Zero(c);
  for (Index k = 0; k < c; ++k) {
    const Index tp = r.confusion(k, k);
    const Index predicted = r.confusion.col(k).sum();
    const Index actual = r.confusion.row(k).sum();
    r.precision(k) = predicted > 0 ? static_cast<Scalar>(tp) / static_cast<Scalar>(predicted) : 0.0;
    r.recall(k) = actual > 0 ? static_cast<Scalar>(tp) / static_cast<Scalar>(actual) : 0.0;
  }
  r.acp = c > 0 ? r.precision.mean() : 0.0;
  r.acr = c > 0 ? r.recall.mean() : 0.0;
  return r;
}

LabeledDataset smote(const LabeledDataset& data, Index k, Scalar target_ratio, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("smote: k must be >= 1");
  if (!(target_ratio > 0)) throw std::invalid_argument("smote: target_ratio must be > 0");
  const std::vector<Index> counts = data.class_counts();
  const Index majority = *std::max_element(counts.begin(), counts.end());
  const auto& x = data.data().values();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);

  std::vector<Eigen::RowVectorXd> rows;
  Labels labels;
  for (Index c = 0; c < static_cast<Index>(counts.size()); ++c) {
    const Index have = counts[static_cast<std::size_t>(c)];
    const Index want = static_cast<Index>(std::ceil(target_ratio * static_cast<Scalar>(majority) - 1e-9));
    if (want <= have) continue;
    if (have < 2) throw std::invalid_argument("smote: class " + std::to_string(c) + " has a single point");
    std::vector<Index> members;
    for (Index i = 0; i < data.size(); ++i) {
      if (data.labels()[static_cast<std::size_t>(i)] == c) members.push_back(i);
    }
    const Index kk = std::min<Index>(k, have - 1);
    std::vector<std::vector<Index>> neighbours(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      std::vector<std::pair<Scalar, Index>> dist;
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (a != b) dist.emplace_back((x.row(members[a]) - x.row(members[b])).squaredNorm(), members[b]);
      }
      std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
      for (Index q = 0; q < kk; ++q) neighbours[a].push_back(dist[static_cast<std::size_t>(q)].second);
    }
    std::uniform_int_distribution<Index> pick(0, kk - 1);
    // Bases cycle through the class so every point seeds the same number of samples, up to one.
    for (Index g = 0; g < want - have; ++g) {
      const std::size_t a = static_cast<std::size_t>(g % have);
      const Index nn = neighbours[a][static_cast<std::size_t>(pick(rng))];
      const Scalar u = unif(rng);
      rows.push_back(x.row(members[a]) + u * (x.row(nn) - x.row(members[a])));
      labels.push_back(static_cast<int>(c));
    }
  }
  if (rows.empty()) return data;
  PointMatrix extra(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) extra.row(static_cast<Index>(i)) = rows[i];
  return data.append(DataMatrix(std::move(extra), data.data().col_names()), labels);
}

Index default_mi_bins(Index n) {
  return std::max<Index>(2, static_cast<Index>(std::ceil(std::sqrt(static_cast<Scalar>(n) / 5.0))));
}

Scalar mutual_information(const Vector& u, const Vector& v, Index bins) {
  if (u.size() != v.size()) throw std::invalid_argument("mutual_information: length mismatch");
  if (u.size() < 1) throw std::invalid_argument("mutual_information: empty input");
  if (bins < 2) throw std::invalid_argument("mutual_information: bins must be >= 2");
  auto binner = [bins](const Vector& w, const char* name) {
    const Scalar lo = w.minCoeff();
    const Scalar hi = w.maxCoeff();
    if (!(hi > lo)) throw std::invalid_argument(std::string("mutual_information: ") + name + " has zero-width range");
    std::vector<Index> out(static_cast<std::size_t>(w.size()));
    for (Index i = 0; i < w.size(); ++i) {
      const Index b = static_cast<Index>(std::floor((w(i) - lo) / (hi - lo) * static_cast<Scalar>(bins)));
      out[static_cast<std::size_t>(i)] = std::clamp<Index>(b, 0, bins - 1);
    }
    return out;
  };
  const auto bu = binner(u, "u");
  const auto bv = binner(v, "v");
  Matrix joint = Matrix::Zero(bins, bins);
  for (std::size_t i = 0; i < bu.size(); ++i) joint(bu[i], bv[i]) += 1;
  joint /= static_cast<Scalar>(u.size());
  const Vector pu = joint.rowwise().sum();
  const Vector pv = joint.colwise().sum().transpose();
  Scalar mi = 0;
  for (Index a = 0; a < bins; ++a) {
    for (Index b = 0; b < bins; ++b) {
      if (joint(a, b) > 0) mi += joint(a, b) * std::log(joint(a, b) / (pu(a) * pv(b)));
    }
  }
  return mi;
}

std::vector<Index> kfold_assignment(Index n, Index folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) throw std::invalid_argument("kfold_assignment: folds must be in [2, n]");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> fold(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) fold[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i % folds;
  return fold;
}

}  // namespace sugar
