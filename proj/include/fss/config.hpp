#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "fss/cohort.hpp"
#include "fss/corpus.hpp"
#include "fss/normalization.hpp"

namespace fss {

// Report families the pipeline can emit.
inline const std::set<std::string> kReportFamilies = {"scores", "cohorts", "gaps",
                                                      "universities"};

struct PipelineConfig {
    ObservationWindow window{2009, 2013, Date{2014, 6, 30}};
    WeightScheme weights;
    ExclusionPolicy exclusions;
    ThresholdSpec thresholds;
    std::set<std::string> reports = kReportFamilies;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> baselines_file;
    int jobs = 1;
};

// Loads a JSON config. Unknown keys anywhere are rejected, as are values
// outside their documented ranges (Errc::ConfigError).
PipelineConfig load_config(const std::filesystem::path& path);

PipelineConfig parse_config_json(const std::string& json_text);

// Canonical JSON of the effective settings; hashed into the run manifest.
std::string config_to_json(const PipelineConfig& config);

} // namespace fss
