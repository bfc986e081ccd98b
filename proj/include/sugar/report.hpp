#pragma once

#include "sugar/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sugar {

using Json = nlohmann::ordered_json;

Json to_json(const KsResult& ks);
Json to_json(const ClassificationReport& r);
Json to_json(const IterationRecord& r);
Json to_json(const ClassifyOutcome& r);
Json to_json(const ClusterOutcome& r);

/// One row per iteration: iteration,input_rows,generated,max_level,
/// degree_variance_before,degree_variance_after,ks_statistic,ks_p_value.
std::string history_csv(const std::vector<IterationRecord>& history);

/// One row per (method, class) with precision and recall, then one
/// (method, "all") row per method holding ACP and ACR.
std::string classification_csv(const ClassifyOutcome& r);

/// Tidy metric,value rows.
std::string metrics_csv(const std::vector<std::pair<std::string, Scalar>>& metrics);

/// Writes text to path, throwing Error with the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sugar
