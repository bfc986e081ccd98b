#pragma once

#include "sugar/eval.hpp"
#include "sugar/generation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sugar {

struct SugarConfig {
  BandwidthSpec degree_bandwidth = BandwidthSpec::maxmin(2.0);
  BandwidthSpec diffusion_bandwidth = BandwidthSpec::adaptive(10);
  Index k_cov = 5;
  int t = 1;
  bool rescale = true;
  std::uint64_t seed = 0;
  Index max_iters = 1;
  std::optional<Scalar> ks_target_p;
  /// A plan asking for more points than this aborts the round. 0 disables the guard.
  Index max_generated = 50000;

  void validate() const;
  bool operator==(const SugarConfig&) const = default;
};

/// Flat JSON with the field names above; bandwidths as "mode:value" strings.
/// Missing fields keep their defaults, unknown fields are rejected.
SugarConfig config_from_json(std::string_view text);
std::string config_to_json(const SugarConfig& cfg);

/// A failure inside one step of the algorithm.
class PipelineError : public Error {
 public:
  PipelineError(std::string step, const std::string& what);
  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

/// The plan asked for more points than SugarConfig::max_generated.
class GenerationLimitError : public PipelineError {
 public:
  GenerationLimitError(Index requested, Index limit);
  Index requested() const { return requested_; }

 private:
  Index requested_;
};

struct IterationRecord {
  Index iteration = 0;
  Index input_rows = 0;
  Index generated = 0;
  Index max_level = 0;
  Scalar degree_variance_before = 0;
  Scalar degree_variance_after = 0;
  std::optional<KsResult> ks;
};

struct AugmentedDataset {
  DataMatrix original;
  DataMatrix generated;
  DataMatrix combined;
  /// Row of `original` each generated point descends from.
  std::vector<Index> origin;
  std::vector<IterationRecord> history;
  std::optional<KsResult> initial_ks;
  std::string stop_reason;
  std::vector<std::string> warnings;
};

/// One pass: degrees, sparsity, local covariances, plan and sample, MGC kernel,
/// diffusion for t steps, rescale.
AugmentedDataset sugar(const DataMatrix& x, const SugarConfig& cfg);

/// A 1-D statistic of the current point set tested for uniformity on [lo, hi].
struct KsProbe {
  std::function<Vector(const DataMatrix&)> coordinate;
  Scalar lo = 0;
  Scalar hi = 1;
};

/// Applies sugar to the running combined set up to max_iters times. Bandwidths
/// are re-resolved each round. Stops early once ks_target_p is reached, when a
/// round generates nothing, or when a round would exceed max_generated.
AugmentedDataset sugar_iterate(const DataMatrix& x, const SugarConfig& cfg,
                               const std::optional<KsProbe>& probe = std::nullopt);

/// Seed used by round `iteration`; round 0 uses the configured seed itself.
std::uint64_t round_seed(std::uint64_t seed, Index iteration);

}  // namespace sugar
