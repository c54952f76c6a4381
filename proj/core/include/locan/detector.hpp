#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "locan/event_model.hpp"
#include "locan/rtd_comp.hpp"
#include "locan/trajectory.hpp"

namespace locan {

struct Thresholds {
    double v_max_kmh = 160.0;
    double d_min_km = 50.0;
};

/// Detection parameters. The qualifying handover code and trigger sets are
/// configuration, not hardcoded; morphology-pair overrides replace both
/// thresholds for transitions between cells of the given classes (the pair
/// is unordered).
struct DetectorConfig {
    double v_max_kmh = 160.0;
    double d_min_km = 50.0;
    std::set<HoFailCode> ho_fail_codes_indicating_ho = {
        HoFailCode::intra_ho, HoFailCode::inter_ho, HoFailCode::x2_ho, HoFailCode::s1_ho};
    std::set<Trigger> triggers_involving_ho = {Trigger::handover};
    std::map<std::pair<Morphology, Morphology>, Thresholds> morphology_overrides;

    Thresholds thresholds_for(Morphology a, Morphology b) const;
    void validate() const; // v_max > 0, d_min >= 0, same for overrides
};

struct ExclusionFlags {
    bool o_hfc = false; // incoming event's ho_fail_code names an HO type
    bool o_sct = false; // incoming event's trigger involves HO
    bool o_tgt = false; // previous event's target cell is the incoming cell

    bool any() const { return o_hfc || o_sct || o_tgt; }
};

/// Handover-evidence predicates for the transition prev -> next. o_hfc and
/// o_sct are evaluated on the incoming (next) event only.
ExclusionFlags evaluate_exclusions(const SignalingEvent& prev, const SignalingEvent& next,
                                   const DetectorConfig& cfg);

/// Estimated upper bound of UE speed across a transition, km/h. IEEE double
/// arithmetic throughout, no rounding. Zero elapsed time returns +infinity
/// (simultaneous presence on two cells is the strongest anomaly candidate).
double estimate_speed_kmh(const Transition& tr, double c_out_prev_km, double c_out_next_km,
                          double rtd_proj_prev_km, double rtd_proj_next_km);

/// One flagged transition with everything needed to audit the verdict.
struct AnomalyFinding {
    std::string imsi;
    std::uint64_t prev_ordinal = 0;
    std::uint64_t next_ordinal = 0;
    std::string prev_cell_id;
    std::string next_cell_id;
    double cell_distance_km = 0.0;
    double elapsed_s = 0.0;
    double v_hat_kmh = 0.0;
    double c_out_prev_km = 0.0;
    double c_out_next_km = 0.0;
    ExclusionFlags exclusions; // all false on an emitted finding
};

/// Stateful judge: applies the anomaly criterion per transition while
/// maintaining the compensation queues and the per-identifier record of the
/// compensation read for the last incoming event.
///
/// Transitions must be fed in global event-time order: sorted by the
/// incoming event's (timestamp, imsi, ordinal). Queue reads happen before
/// the transition's own push, and every transition pushes its compensation
/// sample whether or not it is excluded.
class Detector {
public:
    Detector(DetectorConfig cfg, CompensationStore& store);

    std::optional<AnomalyFinding> judge(const Transition& tr, const EventDataset& ds);

    const DetectorConfig& config() const { return cfg_; }

private:
    struct CachedRead {
        std::uint64_t ordinal = 0;
        double c_out_km = 0.0;
    };

    DetectorConfig cfg_;
    CompensationStore* store_;
    std::unordered_map<std::string, CachedRead> last_read_;
};

} // namespace locan
