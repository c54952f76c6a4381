#include "datasets.hpp"

#include <string>

namespace testsupport {

locan::EventDataset random_mini_dataset(std::mt19937_64& rng, std::size_t max_cells,
                                        std::size_t max_imsis, std::size_t max_events) {
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto below = [&rng](std::uint64_t n) { return n == 0 ? 0 : rng() % n; };

    locan::EventDataset ds;

    const std::size_t n_cells = 2 + below(max_cells - 1);
    for (std::size_t i = 0; i < n_cells; ++i) {
        std::optional<double> azimuth;
        if (unit() < 0.7) azimuth = unit() * 360.0;
        const auto morph = static_cast<locan::Morphology>(below(3));
        // ~6 degrees of latitude and longitude around a mid-latitude point.
        ds.cells.add(locan::CellSite{"CELL" + std::to_string(i),
                                     locan::GeoPoint(30.0 + unit() * 6.0, -100.0 + unit() * 6.0),
                                     azimuth, morph});
    }

    const std::size_t n_imsis = 1 + below(max_imsis);
    const std::size_t n_events = 2 + below(max_events - 1);
    const std::int64_t day_start = 1710374400000;

    for (std::size_t i = 0; i < n_events; ++i) {
        locan::SignalingEvent e;
        // Coarse timestamp grid so ties actually occur.
        e.record_timestamp_ms = day_start + static_cast<std::int64_t>(below(40000)) * 2000;
        e.imsi = "IMSI" + std::to_string(below(n_imsis));
        if (unit() < 0.9) e.imei = "IMEI" + std::to_string(below(n_imsis));
        e.current_cell_id = "CELL" + std::to_string(below(n_cells));
        if (unit() < 0.15) e.target_cell_id = "CELL" + std::to_string(below(n_cells));
        if (unit() < 0.10) e.source_cell_id = "CELL" + std::to_string(below(n_cells));

        const double trig = unit();
        if (trig < 0.10) {
            e.start_collection_trigger = locan::Trigger::handover;
        } else if (trig < 0.50) {
            e.start_collection_trigger = locan::Trigger::rrc_reestablishment;
        } else if (trig < 0.55) {
            e.start_collection_trigger = locan::Trigger::attach;
        } else if (trig < 0.90) {
            e.start_collection_trigger = locan::Trigger::service_request;
        } else {
            e.start_collection_trigger = locan::Trigger::other;
        }
        const double hfc = unit();
        if (hfc < 0.80) {
            e.ho_fail_code = locan::HoFailCode::none;
        } else if (hfc < 0.97) {
            e.ho_fail_code = static_cast<locan::HoFailCode>(1 + below(4));
        } else {
            e.ho_fail_code = locan::HoFailCode::failure_other;
        }
        if (unit() < 0.7) e.first_rtd = static_cast<std::uint32_t>(below(5000));
        if (unit() < 0.7) e.last_rtd = static_cast<std::uint32_t>(below(5000));
        e.plane = unit() < 0.4 ? locan::Plane::nas : locan::Plane::ran_other;
        ds.events.push_back(std::move(e));
    }
    return ds;
}

} // namespace testsupport
