#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "locan/detector.hpp"
#include "locan/event_model.hpp"
#include "locan/rtd_comp.hpp"

namespace locan {

struct PipelineConfig {
    DetectorConfig detector;
    QueueParams queue;
    bool prefilter_enabled = true;
    unsigned workers = 1;
    std::filesystem::path queue_dump_path; // non-empty: write the post-run queue snapshot CSV
};

struct StageTimings {
    double extract_s = 0.0;
    double prefilter_s = 0.0;
    double detect_s = 0.0;
    double total_s = 0.0;
};

struct PipelineReport {
    std::size_t i_all_count = 0;
    std::size_t i_nas_count = 0;
    std::size_t i_final_count = 0;
    std::vector<std::string> flagged_imsis;  // sorted
    std::vector<AnomalyFinding> findings;    // global judge order
    StageTimings timings;
    std::size_t peak_queue_cells = 0;
    bool prefilter_enabled = true;
};

/// Identifiers with NAS events on at least two distinct cells.
std::unordered_set<std::string> extract_active(const EventDataset& ds);

/// NAS-only pre-filter: keeps identifiers having some consecutive NAS pair on
/// different cells whose raw distance and raw speed (no RTD, no compensation,
/// no handover exclusions) exceed the thresholds.
std::unordered_set<std::string> nas_prefilter(const EventDataset& ds,
                                              const std::unordered_set<std::string>& i_all,
                                              const DetectorConfig& cfg,
                                              unsigned workers = 1);

struct DetectionResult {
    std::vector<AnomalyFinding> findings;
    std::unordered_set<std::string> flagged_imsis;
};

/// Full criterion over all events (both planes) of the target identifiers.
/// Transition generation may run in parallel; judging is applied serially in
/// global event-time order, so results are identical for any worker count.
DetectionResult full_detection(const EventDataset& ds,
                               const std::unordered_set<std::string>& target_imsis,
                               const DetectorConfig& cfg, CompensationStore& store,
                               unsigned workers = 1);

/// The end-to-end pipeline. With the pre-filter disabled the full criterion
/// runs over all active identifiers and i_nas_count is reported as
/// i_all_count (the set actually fed to full detection). The compensation
/// store is fresh per run. Verifies the I subset-of I_NAS subset-of I_all
/// chain and throws std::logic_error if it is violated.
PipelineReport run(const EventDataset& ds, const PipelineConfig& cfg);

} // namespace locan
