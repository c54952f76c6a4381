#include "locan/detector.hpp"

#include <limits>
#include <stdexcept>

namespace locan {

namespace {

std::pair<Morphology, Morphology> canonical_pair(Morphology a, Morphology b) {
    if (static_cast<int>(b) < static_cast<int>(a)) std::swap(a, b);
    return {a, b};
}

void validate_thresholds(double v_max_kmh, double d_min_km) {
    if (!(v_max_kmh > 0.0)) {
        throw std::invalid_argument("v_max_kmh must be positive");
    }
    if (!(d_min_km >= 0.0)) {
        throw std::invalid_argument("d_min_km must be nonnegative");
    }
}

} // namespace

Thresholds DetectorConfig::thresholds_for(Morphology a, Morphology b) const {
    auto it = morphology_overrides.find(canonical_pair(a, b));
    if (it != morphology_overrides.end()) return it->second;
    return Thresholds{v_max_kmh, d_min_km};
}

void DetectorConfig::validate() const {
    validate_thresholds(v_max_kmh, d_min_km);
    for (const auto& [pair, th] : morphology_overrides) {
        validate_thresholds(th.v_max_kmh, th.d_min_km);
        if (pair != canonical_pair(pair.first, pair.second)) {
            throw std::invalid_argument("morphology override pair must be in canonical order");
        }
    }
}

ExclusionFlags evaluate_exclusions(const SignalingEvent& prev, const SignalingEvent& next,
                                   const DetectorConfig& cfg) {
    ExclusionFlags flags;
    flags.o_hfc = cfg.ho_fail_codes_indicating_ho.contains(next.ho_fail_code);
    flags.o_sct = cfg.triggers_involving_ho.contains(next.start_collection_trigger);
    flags.o_tgt = prev.target_cell_id.has_value() && *prev.target_cell_id == next.current_cell_id;
    return flags;
}

double estimate_speed_kmh(const Transition& tr, double c_out_prev_km, double c_out_next_km,
                          double rtd_proj_prev_km, double rtd_proj_next_km) {
    if (tr.elapsed_s == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double numerator_km = tr.cell_distance_km - rtd_proj_next_km - rtd_proj_prev_km -
                                (c_out_next_km + c_out_prev_km) / 2.0;
    return numerator_km / (tr.elapsed_s / 3600.0);
}

Detector::Detector(DetectorConfig cfg, CompensationStore& store)
    : cfg_(std::move(cfg)), store_(&store) {
    cfg_.validate();
}

std::optional<AnomalyFinding> Detector::judge(const Transition& tr, const EventDataset& ds) {
    if (tr.prev_ordinal >= ds.events.size() || tr.next_ordinal >= ds.events.size()) {
        throw std::logic_error("transition ordinal out of range");
    }
    const SignalingEvent& prev = ds.events[tr.prev_ordinal];
    const SignalingEvent& next = ds.events[tr.next_ordinal];
    if (prev.current_cell_id == next.current_cell_id) {
        throw std::logic_error("same-cell pair fed to judge; not a transition");
    }
    const CellSite* prev_cell = ds.cells.find(prev.current_cell_id);
    const CellSite* next_cell = ds.cells.find(next.current_cell_id);
    if (prev_cell == nullptr || next_cell == nullptr) {
        throw std::logic_error("transition references a cell missing from the catalog");
    }

    const ExclusionFlags flags = evaluate_exclusions(prev, next, cfg_);
    const Thresholds th = cfg_.thresholds_for(prev_cell->morphology, next_cell->morphology);
    const double proj_prev = rtd_projection_km(effective_rtd(prev), tr.theta_prev_deg);
    const double proj_next = rtd_projection_km(effective_rtd(next), tr.theta_next_deg);
    const double c_in = compute_c_in(tr, proj_prev, proj_next, th.v_max_kmh);

    if (flags.any()) {
        // Excluded transitions still feed the queue so it keeps tracking
        // normal radio conditions; no compensation read happens for them.
        store_->queue_for(next.current_cell_id).push(c_in);
        return std::nullopt;
    }

    double c_out_prev;
    if (auto it = last_read_.find(tr.imsi);
        it != last_read_.end() && it->second.ordinal == tr.prev_ordinal) {
        c_out_prev = it->second.c_out_km;
    } else {
        // The previous event was never the incoming side of a judged
        // transition (first transition, same-cell run, or an excluded
        // predecessor): read its cell's queue without pushing.
        c_out_prev = store_->queue_for(prev.current_cell_id).read_c_out();
    }

    CompensationQueue& next_queue = store_->queue_for(next.current_cell_id);
    const double c_out_next = next_queue.read_c_out(); // before this transition's push
    next_queue.push(c_in);
    last_read_[tr.imsi] = CachedRead{tr.next_ordinal, c_out_next};

    const double v_hat = estimate_speed_kmh(tr, c_out_prev, c_out_next, proj_prev, proj_next);
    if (!(tr.cell_distance_km > th.d_min_km && v_hat > th.v_max_kmh)) {
        return std::nullopt;
    }

    AnomalyFinding finding;
    finding.imsi = tr.imsi;
    finding.prev_ordinal = tr.prev_ordinal;
    finding.next_ordinal = tr.next_ordinal;
    finding.prev_cell_id = prev.current_cell_id;
    finding.next_cell_id = next.current_cell_id;
    finding.cell_distance_km = tr.cell_distance_km;
    finding.elapsed_s = tr.elapsed_s;
    finding.v_hat_kmh = v_hat;
    finding.c_out_prev_km = c_out_prev;
    finding.c_out_next_km = c_out_next;
    finding.exclusions = flags;
    return finding;
}

} // namespace locan
