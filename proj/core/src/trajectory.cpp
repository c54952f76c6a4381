#include "locan/trajectory.hpp"

#include <algorithm>
#include <thread>

#include "locan/geo.hpp"

namespace locan {

const TrajectoryIndex::Sequence* TrajectoryIndex::find(const std::string& imsi) const {
    auto it = sequences_.find(imsi);
    return it == sequences_.end() ? nullptr : &it->second;
}

std::vector<std::string> TrajectoryIndex::imsis_sorted() const {
    std::vector<std::string> out;
    out.reserve(sequences_.size());
    for (const auto& [imsi, seq] : sequences_) out.push_back(imsi);
    std::sort(out.begin(), out.end());
    return out;
}

TrajectoryIndex build_index(const EventDataset& ds,
                            const std::unordered_set<std::string>* imsi_filter,
                            unsigned workers) {
    TrajectoryIndex idx;
    idx.sequences_.reserve(imsi_filter ? imsi_filter->size() : ds.events.size() / 4 + 1);

    for (std::uint64_t ordinal = 0; ordinal < ds.events.size(); ++ordinal) {
        const SignalingEvent& e = ds.events[ordinal];
        if (imsi_filter && !imsi_filter->contains(e.imsi)) continue;
        idx.sequences_[e.imsi].push_back(ordinal);
    }

    // Events were appended in ordinal order, so a stable sort by timestamp
    // keeps file order between equal timestamps.
    const auto sort_sequence = [&ds](TrajectoryIndex::Sequence& seq) {
        std::stable_sort(seq.begin(), seq.end(), [&ds](std::uint64_t a, std::uint64_t b) {
            return ds.events[a].record_timestamp_ms < ds.events[b].record_timestamp_ms;
        });
    };

    if (workers <= 1 || idx.sequences_.size() < 2) {
        for (auto& [imsi, seq] : idx.sequences_) sort_sequence(seq);
        return idx;
    }

    std::vector<TrajectoryIndex::Sequence*> buckets;
    buckets.reserve(idx.sequences_.size());
    for (auto& [imsi, seq] : idx.sequences_) buckets.push_back(&seq);

    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(workers, buckets.size());
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < buckets.size(); i += n) sort_sequence(*buckets[i]);
        });
    }
    for (auto& t : pool) t.join();
    return idx;
}

std::vector<Transition> transitions(const TrajectoryIndex& idx, const std::string& imsi,
                                    const EventDataset& ds) {
    std::vector<Transition> out;
    const TrajectoryIndex::Sequence* seq = idx.find(imsi);
    if (seq == nullptr || seq->size() < 2) return out;

    for (std::size_t k = 1; k < seq->size(); ++k) {
        const std::uint64_t prev_ord = (*seq)[k - 1];
        const std::uint64_t next_ord = (*seq)[k];
        const SignalingEvent& prev = ds.events[prev_ord];
        const SignalingEvent& next = ds.events[next_ord];
        if (prev.current_cell_id == next.current_cell_id) continue;

        const CellSite& prev_cell = ds.cells.at(prev.current_cell_id);
        const CellSite& next_cell = ds.cells.at(next.current_cell_id);

        Transition tr;
        tr.imsi = imsi;
        tr.prev_ordinal = prev_ord;
        tr.next_ordinal = next_ord;
        tr.elapsed_s =
            static_cast<double>(next.record_timestamp_ms - prev.record_timestamp_ms) / 1000.0;
        tr.cell_distance_km = haversine_km(prev_cell.position, next_cell.position);

        const bool coincident = prev_cell.position.lat_deg == next_cell.position.lat_deg &&
                                prev_cell.position.lon_deg == next_cell.position.lon_deg;
        if (!coincident) {
            if (prev_cell.antenna_azimuth_deg) {
                tr.theta_prev_deg = azimuth_offset_deg(
                    *prev_cell.antenna_azimuth_deg,
                    bearing_deg(prev_cell.position, next_cell.position));
            }
            if (next_cell.antenna_azimuth_deg) {
                tr.theta_next_deg = azimuth_offset_deg(
                    *next_cell.antenna_azimuth_deg,
                    bearing_deg(next_cell.position, prev_cell.position));
            }
        }
        out.push_back(std::move(tr));
    }
    return out;
}

} // namespace locan
