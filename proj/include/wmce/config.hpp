#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmce/harness.hpp"

namespace wmce {

/// Everything a CLI run needs beyond the experiment itself.
struct RunConfig {
  ExperimentConfig experiment;
  /// Replication index used by `simulate` and by `estimate` when it samples.
  std::uint64_t replication = 0;
  /// Paths file consumed by `estimate`; empty means sample in process.
  std::string paths_file;

  bool operator==(const RunConfig&) const = default;
};

/// Applies `key.sub=value` overrides to a JSON document. Values are parsed
/// as JSON when possible and kept as strings otherwise.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

/// Parses and fully validates a config document. Schema errors carry a
/// JSON-pointer location, e.g. "/model/hurst: ...".
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});

/// Explicit form (thetas and sigmas spelled out) that parses back to an equal config.
nlohmann::json serialize_config(const RunConfig& config);

nlohmann::json to_json(const EstimateResult& result, const SpectralModel& model);
nlohmann::json to_json(const SamplingScheme& scheme);

}  // namespace wmce
