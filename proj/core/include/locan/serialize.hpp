#pragma once

#include <string>

#include "locan/pipeline.hpp"

namespace locan {

/// One JSON object per finding, newline-terminated. With redact=true the
/// cell-id fields are omitted so the output names no locations.
/// v_hat_kmh serializes as null when the speed is unbounded (zero elapsed).
std::string findings_to_jsonl(const std::vector<AnomalyFinding>& findings, bool redact = false);

/// The run report as a single JSON document (timing fields included; they are
/// the only fields that vary between identical runs).
std::string report_to_json(const PipelineReport& report, const PipelineConfig& cfg);

} // namespace locan
