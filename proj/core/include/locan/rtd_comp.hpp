#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>

#include "locan/trajectory.hpp"

namespace locan {

/// One LTE basic time unit, seconds.
inline constexpr double kLteTsSeconds = 1.0 / (15000.0 * 2048.0);

inline constexpr double kSpeedOfLightMps = 299'792'458.0;

/// Distance covered by one RTD unit: T_s * c, in km (~9.7589 m).
inline constexpr double kRtdUnitKm = kLteTsSeconds * kSpeedOfLightMps / 1000.0;

/// UE-to-cell distance estimate from a raw RTD sample.
inline double rtd_distance_km(std::uint32_t rtd_units) {
    return static_cast<double>(rtd_units) * kRtdUnitKm;
}

/// RTD units whose distance is closest to the given length. Saturates at the
/// 32-bit range; negative lengths map to 0.
std::uint32_t rtd_units_from_km(double km);

/// Projection of the RTD distance onto the inter-cell direction:
/// rtd_distance * cos(theta). Zero when RTD or theta is absent. cos(theta)
/// is applied unclamped, so theta > 90 degrees yields a negative projection.
double rtd_projection_km(std::optional<std::uint32_t> rtd_units,
                         std::optional<double> theta_deg);

struct QueueParams {
    std::size_t capacity_n = 1000;
    std::size_t tolerance_m = 1;
    double init_value_km = 20.0;

    void validate() const; // capacity_n > 0, tolerance_m < capacity_n
};

/// Bounded FIFO of compensation samples for one cell. Reading returns the
/// (m+1)-th highest of the current contents, or the init value while fewer
/// than m+1 samples exist.
class CompensationQueue {
public:
    explicit CompensationQueue(QueueParams params);

    void push(double c_in_km);
    double read_c_out() const;

    std::size_t size() const { return fifo_.size(); }
    const QueueParams& params() const { return params_; }
    const std::deque<double>& samples() const { return fifo_; } // oldest first

private:
    QueueParams params_;
    std::deque<double> fifo_;
    std::multiset<double, std::greater<double>> ordered_;
};

/// Per-cell queues, created on first touch with the store's parameters.
class CompensationStore {
public:
    explicit CompensationStore(QueueParams params);

    CompensationQueue& queue_for(const std::string& cell_id);
    const CompensationQueue* find(const std::string& cell_id) const;
    std::size_t cell_count() const { return queues_.size(); }
    const QueueParams& params() const { return params_; }

    /// Debug snapshot: one `cell_id,sample,...` row per queue (oldest first),
    /// cells in lexicographic order. Not load-bearing.
    void dump_csv(std::ostream& out) const;

private:
    QueueParams params_;
    std::unordered_map<std::string, CompensationQueue> queues_;
};

/// The compensation sample a transition contributes to the incoming cell's
/// queue: cell distance minus the maximal UE movement (v_max * elapsed) and
/// both RTD projections. May be negative; stored as-is.
double compute_c_in(const Transition& tr, double rtd_proj_prev_km, double rtd_proj_next_km,
                    double v_max_kmh);

} // namespace locan
