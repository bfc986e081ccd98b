#include "sugar/pipeline.hpp"
#include "sugar/mgc.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

namespace sugar {
namespace {

template <typename F>
auto step(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

PipelineError::PipelineError(std::string step, const std::string& what)
    : Error(step + ": " + what), step_(std::move(step)) {}

GenerationLimitError::GenerationLimitError(Index requested, Index limit)
    : PipelineError("generation_bounds", "plan requests " + std::to_string(requested) +
                                             " points, above max_generated = " + std::to_string(limit)),
      requested_(requested) {}

void SugarConfig::validate() const {
  degree_bandwidth.validate();
  diffusion_bandwidth.validate();
  if (k_cov < 1) throw std::invalid_argument("SugarConfig: k_cov must be >= 1");
  if (t < 0) throw std::invalid_argument("SugarConfig: t must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("SugarConfig: max_iters must be >= 1");
  if (max_generated < 0) throw std::invalid_argument("SugarConfig: max_generated must be >= 0");
  if (ks_target_p && !(*ks_target_p > 0 && *ks_target_p < 1)) {
    throw std::invalid_argument("SugarConfig: ks_target_p must be in (0, 1)");
  }
}

SugarConfig config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  SugarConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "degree_bandwidth") {
        cfg.degree_bandwidth = BandwidthSpec::parse(value.get<std::string>());
      } else if (key == "diffusion_bandwidth") {
        cfg.diffusion_bandwidth = BandwidthSpec::parse(value.get<std::string>());
      } else if (key == "k_cov") {
        cfg.k_cov = value.get<Index>();
      } else if (key == "t") {
        cfg.t = value.get<int>();
      } else if (key == "rescale") {
        cfg.rescale = value.get<bool>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "max_iters") {
        cfg.max_iters = value.get<Index>();
      } else if (key == "ks_target_p") {
        if (value.is_null()) {
          cfg.ks_target_p.reset();
        } else {
          cfg.ks_target_p = value.get<Scalar>();
        }
      } else if (key == "max_generated") {
        cfg.max_generated = value.get<Index>();
      } else {
        throw std::invalid_argument("config: unknown field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const SugarConfig& cfg) {
  nlohmann::ordered_json j;
  j["degree_bandwidth"] = cfg.degree_bandwidth.to_string();
  j["diffusion_bandwidth"] = cfg.diffusion_bandwidth.to_string();
  j["k_cov"] = cfg.k_cov;
  j["t"] = cfg.t;
  j["rescale"] = cfg.rescale;
  j["seed"] = cfg.seed;
  j["max_iters"] = cfg.max_iters;
  j["ks_target_p"] = cfg.ks_target_p ? nlohmann::ordered_json(*cfg.ks_target_p) : nlohmann::ordered_json(nullptr);
  j["max_generated"] = cfg.max_generated;
  return j.dump(2);
}

std::uint64_t round_seed(std::uint64_t seed, Index iteration) {
  return seed + static_cast<std::uint64_t>(iteration) * 0x9E3779B97F4A7C15ULL;
}

AugmentedDataset sugar(const DataMatrix& x, const SugarConfig& cfg) {
  step("config", [&] {
    cfg.validate();
    return 0;
  });
  const Index n = x.rows();
  if (n < std::max<Index>(cfg.k_cov + 1, 2)) {
    throw PipelineError("input", "need at least max(k_cov + 1, 2) = " + std::to_string(std::max<Index>(cfg.k_cov + 1, 2)) +
                                     " points, got " + std::to_string(n));
  }

  const ResolvedBandwidth degree_bw = step("degrees", [&] { return resolve_bandwidth(x, cfg.degree_bandwidth); });
  const DegreeProfile profile = step("degrees", [&] { return degree_profile(x, degree_bw); });
  const LocalCovarianceSet cov = step("local_covariances", [&] { return local_covariances(x, cfg.k_cov); });
  const GenerationPlan plan = step("generation_bounds", [&] {
    return generation_bounds(profile, cov, degree_bw.scales.sigma2_vector(n));
  });
  if (cfg.max_generated > 0 && plan.total > cfg.max_generated) throw GenerationLimitError(plan.total, cfg.max_generated);

  AugmentedDataset out;
  out.original = x;
  IterationRecord record;
  record.input_rows = n;
  record.generated = plan.total;
  record.max_level = plan.levels.empty() ? 0 : *std::max_element(plan.levels.begin(), plan.levels.end());
  record.degree_variance_before = step("degree_variance", [&] { return sample_variance(profile.degrees / profile.degrees.mean()); });

  if (plan.total == 0) {
    out.generated = DataMatrix::empty(x.cols(), x.col_names());
    out.combined = x;
    record.degree_variance_after = record.degree_variance_before;
    out.history.push_back(record);
    return out;
  }

  const GeneratedBatch batch = step("sample_batch", [&] { return sample_batch(x, cov, plan, cfg.seed); });
  DataMatrix y = batch.points;
  if (cfg.t > 0) {
    const MgcKernel khat = step("mgc_kernel", [&] {
      const ResolvedBandwidth diff_bw = resolve_bandwidth(x, cfg.diffusion_bandwidth);
      // Generated points carry the scale of the point they were drawn around.
      return mgc_kernel(batch.points, diff_bw.scales.select(batch.origin), x, diff_bw.scales, profile.sparsities);
    });
    y = step("diffuse", [&] { return diffuse(khat, batch, cfg.t); });
  }
  if (cfg.rescale) {
    RescaleResult scaled = step("rescale", [&] { return rescale(y, x); });
    y = std::move(scaled.values);
    out.warnings = std::move(scaled.warnings);
  }

  out.generated = y;
  out.origin = batch.origin;
  out.combined = x.vstack(y);
  record.degree_variance_after = step("degree_variance", [&] { return degree_variance(out.combined, cfg.degree_bandwidth); });
  out.history.push_back(record);
  return out;
}

AugmentedDataset sugar_iterate(const DataMatrix& x, const SugarConfig& cfg, const std::optional<KsProbe>& probe) {
  cfg.validate();
  auto ks_of = [&](const DataMatrix& z) { return ks_uniform_test(probe->coordinate(z), probe->lo, probe->hi); };

  AugmentedDataset out;
  out.original = x;
  out.generated = DataMatrix::empty(x.cols(), x.col_names());
  out.combined = x;
  if (probe) out.initial_ks = step("ks_probe", [&] { return ks_of(x); });
  out.stop_reason = "max_iters";

  for (Index it = 0; it < cfg.max_iters; ++it) {
    SugarConfig round = cfg;
    round.seed = round_seed(cfg.seed, it);
    AugmentedDataset pass;
    try {
      pass = sugar(out.combined, round);
    } catch (const GenerationLimitError&) {
      if (it == 0) throw;
      out.stop_reason = "max_generated";
      break;
    }
    IterationRecord record = pass.history.front();
    record.iteration = it;
    // Origins of points generated this round map through the running set back to X.
    for (Index o : pass.origin) {
      out.origin.push_back(o < x.rows() ? o : out.origin[static_cast<std::size_t>(o - x.rows())]);
    }
    if (pass.generated.rows() > 0) {
      out.generated = out.generated.rows() == 0 ? pass.generated : out.generated.vstack(pass.generated);
      out.combined = pass.combined;
    }
    for (auto& w : pass.warnings) out.warnings.push_back("iteration " + std::to_string(it) + ": " + w);
    if (probe) record.ks = step("ks_probe", [&] { return ks_of(out.combined); });
    out.history.push_back(record);

    if (record.generated == 0) {
      out.stop_reason = "nothing_generated";
      break;
    }
    if (cfg.ks_target_p && record.ks && record.ks->p_value >= *cfg.ks_target_p) {
      out.stop_reason = "ks_target_p";
      break;
    }
  }
  return out;
}

}  // namespace sugar
