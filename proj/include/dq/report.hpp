#pragma once
#include <string>

#include <json.hpp>

#include "dq/metrics.hpp"
#include "dq/sweep.hpp"

namespace dq {

// Suite and scoring configuration echoed into every report. Execution-only
// settings (jobs) are deliberately excluded so reruns at any parallelism
// produce identical bytes.
nlohmann::json config_json(const AssessConfig& config);
nlohmann::json config_json(const SweepConfig& config);

// {qa, qa1, qa2, level, mean_accuracy, per_model, per_error_delta,
//  resample_count, p, seed, derived_seeds, config}
nlohmann::json quality_report(const QualityScore& score,
                              const AssessConfig& config);

void write_json(const std::string& path, const nlohmann::json& doc);

} // namespace dq
