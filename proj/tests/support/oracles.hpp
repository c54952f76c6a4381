#pragma once

// Independent reference implementations used to check the library. These
// deliberately avoid the library's own geometry and queue code paths: the
// distance uses the spherical Vincenty form instead of the haversine form,
// the order statistic is a sort, and the detection walk is a plain quadratic
// re-implementation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locan/detector.hpp"
#include "locan/event_model.hpp"
#include "locan/rtd_comp.hpp"

namespace oracle {

/// Spherical Vincenty special-case distance, km (R = 6371).
double distance_km(double lat1, double lon1, double lat2, double lon2);

/// Initial great-circle bearing, degrees in [0, 360).
double initial_bearing_deg(double lat1, double lon1, double lat2, double lon2);

/// (m+1)-th highest of the window, or init when fewer than m+1 samples.
double kth_highest(const std::vector<double>& window, std::size_t m, double init);

struct NaiveFinding {
    std::string imsi;
    std::uint64_t prev_ordinal = 0;
    std::uint64_t next_ordinal = 0;
    double cell_distance_km = 0.0;
    double v_hat_kmh = 0.0;
};

/// Quadratic re-implementation of the whole detection path with the
/// pre-filter disabled: active-identifier extraction, per-identifier
/// chronological walk, per-cell compensation windows with read-before-push,
/// handover exclusions, and the distance/speed criterion, applied in global
/// event-time order.
std::vector<NaiveFinding> naive_detect(const locan::EventDataset& ds,
                                       const locan::DetectorConfig& cfg,
                                       const locan::QueueParams& queue);

} // namespace oracle
