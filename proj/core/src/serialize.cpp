#include "locan/serialize.hpp"

#include <cmath>

#include "json.hpp"

namespace locan {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json finding_to_json(const AnomalyFinding& f, bool redact) {
    ordered_json j;
    j["imsi"] = f.imsi;
    j["prev_ordinal"] = f.prev_ordinal;
    j["next_ordinal"] = f.next_ordinal;
    if (!redact) {
        j["prev_cell_id"] = f.prev_cell_id;
        j["next_cell_id"] = f.next_cell_id;
    }
    j["cell_distance_km"] = f.cell_distance_km;
    j["elapsed_s"] = f.elapsed_s;
    if (std::isfinite(f.v_hat_kmh)) {
        j["v_hat_kmh"] = f.v_hat_kmh;
    } else {
        j["v_hat_kmh"] = nullptr;
    }
    j["c_out_prev_km"] = f.c_out_prev_km;
    j["c_out_next_km"] = f.c_out_next_km;
    j["o_hfc"] = f.exclusions.o_hfc;
    j["o_sct"] = f.exclusions.o_sct;
    j["o_tgt"] = f.exclusions.o_tgt;
    return j;
}

} // namespace

std::string findings_to_jsonl(const std::vector<AnomalyFinding>& findings, bool redact) {
    std::string out;
    for (const AnomalyFinding& f : findings) {
        out += finding_to_json(f, redact).dump();
        out += '\n';
    }
    return out;
}

std::string report_to_json(const PipelineReport& report, const PipelineConfig& cfg) {
    ordered_json j;
    j["i_all_count"] = report.i_all_count;
    j["i_nas_count"] = report.i_nas_count;
    j["i_final_count"] = report.i_final_count;
    j["findings_count"] = report.findings.size();
    j["flagged_imsis"] = report.flagged_imsis;
    j["peak_queue_cells"] = report.peak_queue_cells;
    j["prefilter_enabled"] = report.prefilter_enabled;
    j["stage_timings_s"] = {
        {"extract", report.timings.extract_s},
        {"prefilter", report.timings.prefilter_s},
        {"detect", report.timings.detect_s},
        {"total", report.timings.total_s},
    };
    j["config"] = {
        {"v_max_kmh", cfg.detector.v_max_kmh},
        {"d_min_km", cfg.detector.d_min_km},
        {"queue_n", cfg.queue.capacity_n},
        {"queue_m", cfg.queue.tolerance_m},
        {"init_comp_km", cfg.queue.init_value_km},
        {"workers", cfg.workers},
    };
    return j.dump(2) + "\n";
}

} // namespace locan
