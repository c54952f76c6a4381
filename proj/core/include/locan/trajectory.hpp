#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "locan/event_model.hpp"

namespace locan {

/// Per-identifier chronological sequences of event ordinals. Within a
/// sequence timestamps are nondecreasing; equal timestamps keep file order.
class TrajectoryIndex {
public:
    using Sequence = std::vector<std::uint64_t>;

    const Sequence* find(const std::string& imsi) const;
    const std::unordered_map<std::string, Sequence>& sequences() const { return sequences_; }
    std::size_t imsi_count() const { return sequences_.size(); }

    /// Identifiers in lexicographic order, for deterministic iteration.
    std::vector<std::string> imsis_sorted() const;

private:
    friend TrajectoryIndex build_index(const EventDataset&,
                                       const std::unordered_set<std::string>*, unsigned);
    std::unordered_map<std::string, Sequence> sequences_;
};

/// Builds the trajectory index over the dataset. When a filter is given only
/// those identifiers are indexed. Sequences are sorted by (timestamp, ordinal).
TrajectoryIndex build_index(const EventDataset& ds,
                            const std::unordered_set<std::string>* imsi_filter = nullptr,
                            unsigned workers = 1);

/// The switch between two consecutive indexed events on different cells.
struct Transition {
    std::string imsi;
    std::uint64_t prev_ordinal = 0;
    std::uint64_t next_ordinal = 0;
    double elapsed_s = 0.0;       // >= 0 by the index sort invariant
    double cell_distance_km = 0.0;
    std::optional<double> theta_prev_deg; // angle at the previous event's cell
    std::optional<double> theta_next_deg; // angle at the next event's cell
};

/// Yields one Transition per consecutive pair of the identifier's sequence
/// whose cell ids differ. Theta values are present only when the cell has an
/// antenna azimuth and the two cell positions do not coincide.
std::vector<Transition> transitions(const TrajectoryIndex& idx, const std::string& imsi,
                                    const EventDataset& ds);

} // namespace locan
