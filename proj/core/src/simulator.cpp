#include "locan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "locan/flat_config.hpp"
#include "locan/geo.hpp"

namespace locan {

namespace {

constexpr double kKmPerDegLat = std::numbers::pi * 6371.0 / 180.0; // ~111.1949
constexpr double kStepSeconds = 30.0;
constexpr double kLastRtdMissingProb = 0.1;

/// Deterministic uniform helpers on top of mt19937_64; avoids the
/// implementation-defined std distributions so output is stable everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    bool bernoulli(double p) { return unit() < p; }
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

private:
    std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Local tangent plane anchored at the region center: x east, y north, km.
struct LocalPlane {
    double lat_center;
    double lon_center;
    double km_per_deg_lon;

    LocalPlane(double lat_c, double lon_c)
        : lat_center(lat_c), lon_center(lon_c),
          km_per_deg_lon(kKmPerDegLat * std::cos(lat_c * std::numbers::pi / 180.0)) {}

    std::pair<double, double> to_xy(double lat, double lon) const {
        return {(lon - lon_center) * km_per_deg_lon, (lat - lat_center) * kKmPerDegLat};
    }
    std::pair<double, double> to_lat_lon(double x, double y) const {
        return {lat_center + y / kKmPerDegLat, lon_center + x / km_per_deg_lon};
    }
};

struct PendingEvent {
    SignalingEvent event;
    EventLabel label = EventLabel::legit;
};

std::string fleet_imsi(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "310150%09zu", index + 1);
    return buf;
}

std::string fleet_imei(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "35%013zu", index + 1);
    return buf;
}

std::string cell_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%05zu", index);
    return buf;
}

struct Grid {
    std::size_t cols = 0;
    std::size_t rows = 0;
    double spacing_km = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;
    std::size_t count = 0;
    std::vector<std::pair<double, double>> xy; // cell positions, km

    std::size_t nearest(double x, double y) const {
        auto clamp_idx = [](double v, std::size_t hi) -> std::size_t {
            if (v < 0.0) return 0;
            const auto i = static_cast<std::size_t>(v + 0.5);
            return i >= hi ? hi - 1 : i;
        };
        std::size_t c = clamp_idx((x - x0) / spacing_km, cols);
        std::size_t r = clamp_idx((y - y0) / spacing_km, rows);
        std::size_t idx = r * cols + c;
        if (idx >= count) {
            const std::size_t last_row = (count - 1) / cols;
            const std::size_t last_width = count - last_row * cols;
            if (r > last_row) r = last_row;
            if (c >= last_width && r == last_row) c = last_width - 1;
            idx = r * cols + c;
        }
        return idx;
    }
};

double distance_km(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

struct Vehicle {
    std::string imsi;
    std::string imei;
    Rng rng;
    double x = 0.0, y = 0.0;
    double wx = 0.0, wy = 0.0;
    double speed_kmh = 0.0;
    bool dwelling = false;
    double dwell_until_s = 0.0;
    double attach_at_s = 0.0;
    bool attached = false;
    long current_cell = -1;
    double last_event_s = 0.0;
    double keepalive_gap_s = 600.0;
};

void check_prob(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
}

} // namespace

AzimuthMode azimuth_mode_from_string(const std::string& s) {
    if (s == "random") return AzimuthMode::random;
    if (s == "sectors") return AzimuthMode::sectors;
    if (s == "absent") return AzimuthMode::absent;
    throw std::invalid_argument("unknown azimuth_mode: " + s);
}

const char* to_string(AzimuthMode m) {
    switch (m) {
    case AzimuthMode::random: return "random";
    case AzimuthMode::sectors: return "sectors";
    case AzimuthMode::absent: return "absent";
    }
    return "?";
}

EventLabel event_label_from_string(const std::string& s) {
    if (s == "legit") return EventLabel::legit;
    if (s == "spoof") return EventLabel::spoof;
    if (s == "corner_idle") return EventLabel::corner_idle;
    if (s == "corner_bounce") return EventLabel::corner_bounce;
    throw std::invalid_argument("unknown event label: " + s);
}

const char* to_string(EventLabel l) {
    switch (l) {
    case EventLabel::legit: return "legit";
    case EventLabel::spoof: return "spoof";
    case EventLabel::corner_idle: return "corner_idle";
    case EventLabel::corner_bounce: return "corner_bounce";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    if (cell_count == 0) throw std::invalid_argument("cell_count must be positive");
    if (!(cell_spacing_km > 0.0)) throw std::invalid_argument("cell_spacing_km must be positive");
    if (!(duration_hours > 0.0)) throw std::invalid_argument("duration_hours must be positive");
    if (!(region_lat_min < region_lat_max)) {
        throw std::invalid_argument("region_lat_min must be below region_lat_max");
    }
    if (!(region_lon_min < region_lon_max)) {
        throw std::invalid_argument("region_lon_min must be below region_lon_max");
    }
    GeoPoint{region_lat_min, region_lon_min};
    GeoPoint{region_lat_max, region_lon_max};
    if (!(legit_v_max_kmh > 0.0)) throw std::invalid_argument("legit_v_max_kmh must be positive");
    if (!(min_speed_kmh > 0.0) || min_speed_kmh > legit_v_max_kmh) {
        throw std::invalid_argument("min_speed_kmh must be in (0, legit_v_max_kmh]");
    }
    if (!(waypoint_dwell_min_s >= 0.0) || waypoint_dwell_max_s < waypoint_dwell_min_s) {
        throw std::invalid_argument("waypoint dwell range is invalid");
    }
    if (!(keepalive_min_gap_s > 0.0) || keepalive_max_gap_s < keepalive_min_gap_s) {
        throw std::invalid_argument("keepalive gap range is invalid");
    }
    check_prob(idle_probability, "idle_probability");
    check_prob(reconnection_ratio, "reconnection_ratio");
    check_prob(nas_fraction, "nas_fraction");
    check_prob(rtd_missing_prob, "rtd_missing_prob");
    check_prob(mountain_cell_fraction, "mountain_cell_fraction");
    check_prob(distant_bounce_rate, "distant_bounce_rate");
    if (!(rtd_noise_km >= 0.0)) throw std::invalid_argument("rtd_noise_km must be nonnegative");
    if (!(mountain_bias_km >= 0.0)) throw std::invalid_argument("mountain_bias_km must be nonnegative");
    if (!(bounce_offset_km >= 0.0)) throw std::invalid_argument("bounce_offset_km must be nonnegative");
    const double morph_sum = morphology_urban + morphology_suburban + morphology_rural;
    if (!(morphology_urban >= 0.0 && morphology_suburban >= 0.0 && morphology_rural >= 0.0) ||
        !(morph_sum > 0.0)) {
        throw std::invalid_argument("morphology mix must be nonnegative and sum to > 0");
    }
    if (start_timestamp_ms <= 0) throw std::invalid_argument("start_timestamp_ms must be positive");
    for (const AttackSpec& a : attacks) {
        if (!(a.offset_km >= 0.0)) throw std::invalid_argument("attack offset_km must be nonnegative");
        if (a.event_count == 0) throw std::invalid_argument("attack event_count must be positive");
        check_prob(a.nas_fraction, "attack nas_fraction");
    }
}

EventDataset GeneratedScenario::to_dataset() const& {
    return EventDataset{events, cells};
}

EventDataset GeneratedScenario::to_dataset() && {
    return EventDataset{std::move(events), std::move(cells)};
}

GeneratedScenario generate(const ScenarioConfig& cfg) {
    cfg.validate();

    GeneratedScenario out;
    const LocalPlane plane((cfg.region_lat_min + cfg.region_lat_max) / 2.0,
                           (cfg.region_lon_min + cfg.region_lon_max) / 2.0);

    Rng scenario_rng(splitmix64(cfg.seed));

    // Cell grid centered on the region.
    Grid grid;
    grid.count = cfg.cell_count;
    grid.spacing_km = cfg.cell_spacing_km;
    grid.cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.cell_count))));
    grid.rows = (cfg.cell_count + grid.cols - 1) / grid.cols;
    grid.x0 = -0.5 * static_cast<double>(grid.cols - 1) * grid.spacing_km;
    grid.y0 = -0.5 * static_cast<double>(grid.rows - 1) * grid.spacing_km;
    grid.xy.reserve(cfg.cell_count);

    const double morph_sum = cfg.morphology_urban + cfg.morphology_suburban + cfg.morphology_rural;
    std::vector<bool> mountainous(cfg.cell_count, false);
    for (std::size_t i = 0; i < cfg.cell_count; ++i) {
        const std::size_t r = i / grid.cols;
        const std::size_t c = i % grid.cols;
        const double x = grid.x0 + static_cast<double>(c) * grid.spacing_km;
        const double y = grid.y0 + static_cast<double>(r) * grid.spacing_km;
        grid.xy.emplace_back(x, y);

        const auto [lat, lon] = plane.to_lat_lon(x, y);
        const double morph_draw = scenario_rng.unit() * morph_sum;
        Morphology morph = Morphology::rural;
        if (morph_draw < cfg.morphology_urban) {
            morph = Morphology::urban;
        } else if (morph_draw < cfg.morphology_urban + cfg.morphology_suburban) {
            morph = Morphology::suburban;
        }
        std::optional<double> azimuth;
        switch (cfg.azimuth_mode) {
        case AzimuthMode::random: azimuth = scenario_rng.uniform(0.0, 360.0); break;
        case AzimuthMode::sectors: azimuth = static_cast<double>(i % 3) * 120.0; break;
        case AzimuthMode::absent: break;
        }
        mountainous[i] = scenario_rng.bernoulli(cfg.mountain_cell_fraction);
        out.cells.add(CellSite{cell_name(i), GeoPoint(lat, lon), azimuth, morph});
    }

    // Vehicles roam the grid hull clipped to the region box.
    double hull_x_min = grid.xy[0].first, hull_x_max = grid.xy[0].first;
    double hull_y_min = grid.xy[0].second, hull_y_max = grid.xy[0].second;
    for (const auto& [x, y] : grid.xy) {
        hull_x_min = std::min(hull_x_min, x);
        hull_x_max = std::max(hull_x_max, x);
        hull_y_min = std::min(hull_y_min, y);
        hull_y_max = std::max(hull_y_max, y);
    }
    const auto [bbox_x_min, bbox_y_min] = plane.to_xy(cfg.region_lat_min, cfg.region_lon_min);
    const auto [bbox_x_max, bbox_y_max] = plane.to_xy(cfg.region_lat_max, cfg.region_lon_max);
    const double roam_x_min = std::max(hull_x_min, bbox_x_min);
    const double roam_x_max = std::min(hull_x_max, bbox_x_max);
    const double roam_y_min = std::max(hull_y_min, bbox_y_min);
    const double roam_y_max = std::min(hull_y_max, bbox_y_max);
    if (!(roam_x_min <= roam_x_max && roam_y_min <= roam_y_max)) {
        throw std::invalid_argument("cell grid does not intersect the region bounding box");
    }

    std::vector<Vehicle> fleet;
    fleet.reserve(cfg.fleet_size);
    for (std::size_t i = 0; i < cfg.fleet_size; ++i) {
        Vehicle v{fleet_imsi(i), fleet_imei(i), Rng(splitmix64(cfg.seed ^ (0xABCD0000ULL + i)))};
        v.x = v.rng.uniform(roam_x_min, roam_x_max);
        v.y = v.rng.uniform(roam_y_min, roam_y_max);
        v.wx = v.rng.uniform(roam_x_min, roam_x_max);
        v.wy = v.rng.uniform(roam_y_min, roam_y_max);
        v.speed_kmh = v.rng.uniform(cfg.min_speed_kmh, cfg.legit_v_max_kmh);
        v.attach_at_s = v.rng.uniform(0.0, cfg.keepalive_max_gap_s);
        v.keepalive_gap_s = v.rng.uniform(cfg.keepalive_min_gap_s, cfg.keepalive_max_gap_s);
        fleet.push_back(std::move(v));
    }

    std::vector<PendingEvent> pending;
    pending.reserve(cfg.fleet_size * 8);

    const auto cell_pos = [&](std::size_t idx) { return grid.xy[idx]; };

    const auto make_rtd = [&](Vehicle& v, std::size_t cell_idx)
        -> std::pair<std::optional<std::uint32_t>, std::optional<std::uint32_t>> {
        if (v.rng.bernoulli(cfg.rtd_missing_prob)) return {std::nullopt, std::nullopt};
        const auto [cx, cy] = cell_pos(cell_idx);
        double d = distance_km(v.x, v.y, cx, cy);
        if (mountainous[cell_idx]) d = std::max(0.0, d - cfg.mountain_bias_km);
        const double first = std::max(0.0, d + v.rng.uniform(-cfg.rtd_noise_km, cfg.rtd_noise_km));
        std::optional<std::uint32_t> last;
        if (!v.rng.bernoulli(kLastRtdMissingProb)) {
            last = rtd_units_from_km(
                std::max(0.0, d + v.rng.uniform(-cfg.rtd_noise_km, cfg.rtd_noise_km)));
        }
        return {rtd_units_from_km(first), last};
    };

    const auto emit = [&](Vehicle& v, double t_s, std::size_t cell_idx, Trigger trigger,
                          Plane event_plane, HoFailCode hfc,
                          std::optional<std::string> target, std::optional<std::string> source,
                          EventLabel label, bool with_rtd) {
        PendingEvent pe;
        pe.event.record_timestamp_ms =
            cfg.start_timestamp_ms + static_cast<std::int64_t>(std::llround(t_s * 1000.0));
        pe.event.imsi = v.imsi;
        pe.event.imei = v.imei;
        pe.event.current_cell_id = cell_name(cell_idx);
        pe.event.target_cell_id = std::move(target);
        pe.event.source_cell_id = std::move(source);
        pe.event.start_collection_trigger = trigger;
        pe.event.ho_fail_code = hfc;
        if (with_rtd) {
            auto [first, last] = make_rtd(v, cell_idx);
            pe.event.first_rtd = first;
            pe.event.last_rtd = last;
        }
        pe.event.plane = event_plane;
        pe.label = label;
        pending.push_back(std::move(pe));
    };

    // A reconnection-style emission: NAS service request or RAN RRC
    // re-establishment, per the configured NAS share.
    const auto emit_reconnection = [&](Vehicle& v, double t_s, std::size_t cell_idx,
                                       EventLabel label) {
        const bool nas = v.rng.bernoulli(cfg.nas_fraction);
        emit(v, t_s, cell_idx, nas ? Trigger::service_request : Trigger::rrc_reestablishment,
             nas ? Plane::nas : Plane::ran_other, HoFailCode::none, std::nullopt, std::nullopt,
             label, true);
    };

    const auto pick_waypoint = [&](Vehicle& v) {
        v.wx = v.rng.uniform(roam_x_min, roam_x_max);
        v.wy = v.rng.uniform(roam_y_min, roam_y_max);
        v.speed_kmh = v.rng.uniform(cfg.min_speed_kmh, cfg.legit_v_max_kmh);
    };

    const double duration_s = cfg.duration_hours * 3600.0;
    for (double t = 0.0; t < duration_s; t += kStepSeconds) {
        for (Vehicle& v : fleet) {
            // Motion.
            if (v.dwelling) {
                if (t >= v.dwell_until_s) {
                    v.dwelling = false;
                    pick_waypoint(v);
                }
            } else {
                const double dx = v.wx - v.x;
                const double dy = v.wy - v.y;
                const double dist = std::hypot(dx, dy);
                const double step_km = v.speed_kmh * kStepSeconds / 3600.0;
                double moved;
                if (dist <= step_km) {
                    v.x = v.wx;
                    v.y = v.wy;
                    moved = dist;
                    if (v.rng.bernoulli(cfg.idle_probability)) {
                        v.dwelling = true;
                        v.dwell_until_s =
                            t + v.rng.uniform(cfg.waypoint_dwell_min_s, cfg.waypoint_dwell_max_s);
                    } else {
                        pick_waypoint(v);
                    }
                } else {
                    v.x += dx / dist * step_km;
                    v.y += dy / dist * step_km;
                    moved = step_km;
                }
                out.stats.max_trace_speed_kmh =
                    std::max(out.stats.max_trace_speed_kmh, moved / (kStepSeconds / 3600.0));
            }

            if (!v.attached) {
                if (t >= v.attach_at_s) {
                    const std::size_t cell = grid.nearest(v.x, v.y);
                    const double t_e = v.attach_at_s;
                    emit(v, t_e, cell, Trigger::attach, Plane::nas, HoFailCode::none, std::nullopt,
                         std::nullopt, EventLabel::legit, true);
                    v.attached = true;
                    v.current_cell = static_cast<long>(cell);
                    v.last_event_s = t_e;
                }
                continue;
            }

            const std::size_t cell = grid.nearest(v.x, v.y);
            bool emitted = false;
            if (static_cast<long>(cell) != v.current_cell) {
                const double t_e = t + v.rng.uniform(0.0, kStepSeconds);
                const std::size_t old_cell = static_cast<std::size_t>(v.current_cell);
                if (v.rng.bernoulli(1.0 - cfg.reconnection_ratio)) {
                    // Handover: a preparation record at the source cell naming
                    // the target, then the completion record at the new cell.
                    emit(v, t_e, old_cell, Trigger::other, Plane::ran_other, HoFailCode::none,
                         cell_name(cell), std::nullopt, EventLabel::legit, true);
                    const double t_done = t_e + v.rng.uniform(0.1, 0.9);
                    emit(v, t_done, cell, Trigger::handover, Plane::ran_other,
                         v.rng.bernoulli(0.5) ? HoFailCode::x2_ho : HoFailCode::s1_ho,
                         std::nullopt, cell_name(old_cell), EventLabel::legit, true);
                    v.last_event_s = t_done;
                    ++out.stats.handover_transitions;
                } else {
                    const bool long_gap = (t_e - v.last_event_s) > 1800.0;
                    emit_reconnection(v, t_e, cell,
                                      long_gap ? EventLabel::corner_idle : EventLabel::legit);
                    v.last_event_s = t_e;
                    ++out.stats.reconnection_transitions;
                }
                v.current_cell = static_cast<long>(cell);
                v.keepalive_gap_s = v.rng.uniform(cfg.keepalive_min_gap_s, cfg.keepalive_max_gap_s);
                emitted = true;
            } else if (t - v.last_event_s >= v.keepalive_gap_s) {
                const double t_e = t + v.rng.uniform(0.0, kStepSeconds);
                const bool long_gap = (t_e - v.last_event_s) > 1800.0;
                emit_reconnection(v, t_e, cell,
                                  long_gap ? EventLabel::corner_idle : EventLabel::legit);
                v.last_event_s = t_e;
                v.keepalive_gap_s = v.rng.uniform(cfg.keepalive_min_gap_s, cfg.keepalive_max_gap_s);
                emitted = true;
            }

            // Occasional far-cell excursion and immediate return (heavy
            // traffic or terrain reflections).
            if (emitted && cfg.distant_bounce_rate > 0.0 &&
                v.rng.bernoulli(cfg.distant_bounce_rate)) {
                const double angle = v.rng.uniform(0.0, 2.0 * std::numbers::pi);
                const double fx = v.x + cfg.bounce_offset_km * std::cos(angle);
                const double fy = v.y + cfg.bounce_offset_km * std::sin(angle);
                const std::size_t far_cell = grid.nearest(fx, fy);
                if (far_cell != cell) {
                    const double t_far = v.last_event_s + v.rng.uniform(1.0, 5.0);
                    const double t_back = t_far + v.rng.uniform(2.0, 15.0);
                    emit_reconnection(v, t_far, far_cell, EventLabel::corner_bounce);
                    emit_reconnection(v, t_back, cell, EventLabel::corner_bounce);
                    v.last_event_s = t_back;
                    ++out.stats.bounce_excursions;
                }
            }
        }
    }

    std::stable_sort(pending.begin(), pending.end(), [](const PendingEvent& a, const PendingEvent& b) {
        return a.event.record_timestamp_ms < b.event.record_timestamp_ms;
    });
    out.events.reserve(pending.size());
    out.labels.reserve(pending.size());
    for (PendingEvent& pe : pending) {
        out.events.push_back(std::move(pe.event));
        out.labels.push_back(pe.label);
    }

    // Spoof injections, spread over the day unless scheduled explicitly.
    const auto duration_ms = static_cast<std::int64_t>(duration_s * 1000.0);
    for (std::size_t k = 0; k < cfg.attacks.size(); ++k) {
        const AttackSpec& spec = cfg.attacks[k];
        std::string victim = spec.victim_imsi;
        if (victim.empty()) {
            if (k >= cfg.fleet_size) {
                throw std::invalid_argument("more auto-victim attacks than vehicles");
            }
            victim = fleet_imsi(k);
        }
        SpoofSchedule schedule;
        schedule.window_ms = 300000;
        schedule.start_ms = cfg.start_timestamp_ms +
                            duration_ms * static_cast<std::int64_t>(k + 1) /
                                static_cast<std::int64_t>(cfg.attacks.size() + 1) -
                            schedule.window_ms / 2;
        schedule.event_count = spec.event_count;
        schedule.nas_fraction = spec.nas_fraction;
        inject_spoof(out, victim, spec.offset_km, schedule,
                     splitmix64(cfg.seed ^ (0x5F00F000ULL + k)));
    }

    return out;
}

void inject_spoof(GeneratedScenario& scenario, const std::string& victim_imsi, double offset_km,
                  const SpoofSchedule& schedule, std::uint64_t seed) {
    Rng rng(seed);

    // Anchor at the victim's latest event at or before the window start.
    const SignalingEvent* anchor = nullptr;
    for (const SignalingEvent& e : scenario.events) {
        if (e.imsi != victim_imsi) continue;
        if (anchor == nullptr || e.record_timestamp_ms <= schedule.start_ms) anchor = &e;
        if (e.record_timestamp_ms > schedule.start_ms && anchor != nullptr) break;
    }
    if (anchor == nullptr) {
        throw std::invalid_argument("spoof victim has no events: " + victim_imsi);
    }
    const GeoPoint anchor_pos = scenario.cells.at(anchor->current_cell_id).position;

    const double default_d_min = DetectorConfig{}.d_min_km;
    if (offset_km < default_d_min) {
        scenario.warnings.push_back("spoof offset " + std::to_string(offset_km) +
                                    " km for " + victim_imsi + " is below the default " +
                                    std::to_string(default_d_min) +
                                    " km distance floor; likely undetectable by design");
    }

    // Attacker cells sit offset_km away along the meridian (exact great-circle
    // distance), nudged east for the second cell of the pair.
    const double dir = (anchor_pos.lat_deg + offset_km / kKmPerDegLat + 0.1 <= 90.0) ? 1.0 : -1.0;
    const double base_lat = anchor_pos.lat_deg + dir * offset_km / kKmPerDegLat;
    const double km_per_deg_lon =
        kKmPerDegLat * std::cos(base_lat * std::numbers::pi / 180.0);

    const std::string id_a = "ATK-" + victim_imsi + "-1";
    const std::string id_b = "ATK-" + victim_imsi + "-2";
    if (!scenario.cells.contains(id_a)) {
        scenario.cells.add(CellSite{id_a, GeoPoint(base_lat, anchor_pos.lon_deg),
                                    rng.uniform(0.0, 360.0), Morphology::suburban});
    }
    if (!scenario.cells.contains(id_b)) {
        const double lon_b = anchor_pos.lon_deg + (offset_km > 0.0 ? 1.0 / km_per_deg_lon : 0.01);
        scenario.cells.add(
            CellSite{id_b, GeoPoint(base_lat, lon_b), rng.uniform(0.0, 360.0), Morphology::suburban});
    }

    const std::string attacker_imei = "86" + victim_imsi.substr(std::min<std::size_t>(2, victim_imsi.size()));

    std::vector<PendingEvent> attack_events;
    attack_events.reserve(schedule.event_count);
    const std::size_t n = schedule.event_count;
    std::size_t nas_emitted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t ts =
            schedule.start_ms +
            (n > 1 ? schedule.window_ms * static_cast<std::int64_t>(i) /
                         static_cast<std::int64_t>(n - 1)
                   : 0);
        // Bresenham spread so the NAS share is met exactly (rounded down).
        const bool nas =
            static_cast<std::size_t>(static_cast<double>(i + 1) * schedule.nas_fraction + 1e-9) >
            nas_emitted;
        if (nas) ++nas_emitted;

        PendingEvent pe;
        pe.event.record_timestamp_ms = ts;
        pe.event.imsi = victim_imsi;
        pe.event.imei = attacker_imei;
        pe.event.current_cell_id = (i % 2 == 0) ? id_a : id_b;
        pe.event.start_collection_trigger =
            nas ? Trigger::service_request : Trigger::rrc_reestablishment;
        pe.event.plane = nas ? Plane::nas : Plane::ran_other;
        pe.event.ho_fail_code = HoFailCode::none;
        pe.event.first_rtd = rtd_units_from_km(rng.uniform(0.05, 1.5));
        pe.event.last_rtd = rtd_units_from_km(rng.uniform(0.05, 1.5));
        pe.label = EventLabel::spoof;
        attack_events.push_back(std::move(pe));
    }

    // Merge into the sorted stream; existing events first on ties.
    std::vector<SignalingEvent> merged_events;
    std::vector<EventLabel> merged_labels;
    merged_events.reserve(scenario.events.size() + attack_events.size());
    merged_labels.reserve(scenario.labels.size() + attack_events.size());
    std::size_t i = 0, j = 0;
    while (i < scenario.events.size() || j < attack_events.size()) {
        const bool take_existing =
            j == attack_events.size() ||
            (i < scenario.events.size() &&
             scenario.events[i].record_timestamp_ms <= attack_events[j].event.record_timestamp_ms);
        if (take_existing) {
            merged_events.push_back(std::move(scenario.events[i]));
            merged_labels.push_back(scenario.labels[i]);
            ++i;
        } else {
            merged_events.push_back(std::move(attack_events[j].event));
            merged_labels.push_back(attack_events[j].label);
            ++j;
        }
    }
    scenario.events = std::move(merged_events);
    scenario.labels = std::move(merged_labels);
    scenario.spoofed_imsis.insert(victim_imsi);
    scenario.stats.attacker_events += schedule.event_count;
}

namespace {

void write_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

void write_scenario_csv(const GeneratedScenario& scenario, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::string cells_csv = std::string(cells_csv_header()) + "\n";
    for (const CellSite& site : scenario.cells.sites()) {
        cells_csv += site.cell_id;
        cells_csv += ',' + format_coord(site.position.lat_deg);
        cells_csv += ',' + format_coord(site.position.lon_deg);
        cells_csv += ',';
        if (site.antenna_azimuth_deg) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", *site.antenna_azimuth_deg);
            cells_csv += buf;
        }
        cells_csv += ',';
        cells_csv += to_string(site.morphology);
        cells_csv += '\n';
    }
    write_or_throw(dir / "cells.csv", cells_csv);

    std::string events_csv = std::string(events_csv_header()) + "\n";
    for (const SignalingEvent& e : scenario.events) {
        events_csv += std::to_string(e.record_timestamp_ms);
        events_csv += ',' + e.imsi;
        events_csv += ',';
        if (e.imei) events_csv += *e.imei;
        events_csv += ',' + e.current_cell_id;
        events_csv += ',';
        if (e.target_cell_id) events_csv += *e.target_cell_id;
        events_csv += ',';
        if (e.source_cell_id) events_csv += *e.source_cell_id;
        events_csv += ',';
        events_csv += to_string(e.start_collection_trigger);
        events_csv += ',';
        events_csv += to_string(e.ho_fail_code);
        events_csv += ',';
        if (e.first_rtd) events_csv += std::to_string(*e.first_rtd);
        events_csv += ',';
        if (e.last_rtd) events_csv += std::to_string(*e.last_rtd);
        events_csv += ',';
        events_csv += to_string(e.plane);
        events_csv += '\n';
    }
    write_or_throw(dir / "events.csv", events_csv);

    std::string truth_csv = "imsi,event_ordinal,label\n";
    for (std::size_t k = 0; k < scenario.events.size(); ++k) {
        truth_csv += scenario.events[k].imsi;
        truth_csv += ',' + std::to_string(k);
        truth_csv += ',';
        truth_csv += to_string(scenario.labels[k]);
        truth_csv += '\n';
    }
    write_or_throw(dir / "ground_truth.csv", truth_csv);
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    const FlatConfig file = FlatConfig::load(path);
    ScenarioConfig cfg;

    cfg.seed = file.get_uint("seed", cfg.seed);
    cfg.start_timestamp_ms = file.get_int("start_timestamp_ms", cfg.start_timestamp_ms);
    cfg.region_lat_min = file.get_double("region_lat_min", cfg.region_lat_min);
    cfg.region_lat_max = file.get_double("region_lat_max", cfg.region_lat_max);
    cfg.region_lon_min = file.get_double("region_lon_min", cfg.region_lon_min);
    cfg.region_lon_max = file.get_double("region_lon_max", cfg.region_lon_max);
    cfg.cell_count = file.get_uint("cell_count", cfg.cell_count);
    cfg.cell_spacing_km = file.get_double("cell_spacing_km", cfg.cell_spacing_km);
    cfg.morphology_urban = file.get_double("morphology_urban", cfg.morphology_urban);
    cfg.morphology_suburban = file.get_double("morphology_suburban", cfg.morphology_suburban);
    cfg.morphology_rural = file.get_double("morphology_rural", cfg.morphology_rural);
    cfg.azimuth_mode = azimuth_mode_from_string(
        file.get_string("azimuth_mode", to_string(cfg.azimuth_mode)));
    cfg.fleet_size = file.get_uint("fleet_size", cfg.fleet_size);
    cfg.duration_hours = file.get_double("duration_hours", cfg.duration_hours);
    cfg.legit_v_max_kmh = file.get_double("legit_v_max_kmh", cfg.legit_v_max_kmh);
    cfg.min_speed_kmh = file.get_double("min_speed_kmh", cfg.min_speed_kmh);
    cfg.waypoint_dwell_min_s = file.get_double("waypoint_dwell_min_s", cfg.waypoint_dwell_min_s);
    cfg.waypoint_dwell_max_s = file.get_double("waypoint_dwell_max_s", cfg.waypoint_dwell_max_s);
    cfg.idle_probability = file.get_double("idle_probability", cfg.idle_probability);
    cfg.reconnection_ratio = file.get_double("reconnection_ratio", cfg.reconnection_ratio);
    cfg.keepalive_min_gap_s = file.get_double("keepalive_min_gap_s", cfg.keepalive_min_gap_s);
    cfg.keepalive_max_gap_s = file.get_double("keepalive_max_gap_s", cfg.keepalive_max_gap_s);
    cfg.nas_fraction = file.get_double("nas_fraction", cfg.nas_fraction);
    cfg.rtd_noise_km = file.get_double("rtd_noise_km", cfg.rtd_noise_km);
    cfg.rtd_missing_prob = file.get_double("rtd_missing_prob", cfg.rtd_missing_prob);
    cfg.mountain_cell_fraction =
        file.get_double("mountain_cell_fraction", cfg.mountain_cell_fraction);
    cfg.mountain_bias_km = file.get_double("mountain_bias_km", cfg.mountain_bias_km);
    cfg.distant_bounce_rate = file.get_double("distant_bounce_rate", cfg.distant_bounce_rate);
    cfg.bounce_offset_km = file.get_double("bounce_offset_km", cfg.bounce_offset_km);

    // Bulk attack settings plus per-attack overrides (attack.<n>.<field>).
    const std::size_t attack_count = file.get_uint("attack_count", 0);
    const AttackSpec bulk{
        "",
        file.get_double("attack_offset_km", AttackSpec{}.offset_km),
        file.get_uint("attack_event_count", AttackSpec{}.event_count),
        file.get_double("attack_nas_fraction", AttackSpec{}.nas_fraction),
    };
    cfg.attacks.assign(attack_count, bulk);

    static const std::unordered_set<std::string> known_keys = {
        "seed", "start_timestamp_ms", "region_lat_min", "region_lat_max", "region_lon_min",
        "region_lon_max", "cell_count", "cell_spacing_km", "morphology_urban",
        "morphology_suburban", "morphology_rural", "azimuth_mode", "fleet_size", "duration_hours",
        "legit_v_max_kmh", "min_speed_kmh", "waypoint_dwell_min_s", "waypoint_dwell_max_s",
        "idle_probability", "reconnection_ratio", "keepalive_min_gap_s", "keepalive_max_gap_s",
        "nas_fraction", "rtd_noise_km", "rtd_missing_prob", "mountain_cell_fraction",
        "mountain_bias_km", "distant_bounce_rate", "bounce_offset_km", "attack_count",
        "attack_offset_km", "attack_event_count", "attack_nas_fraction"};

    for (const std::string& key : file.keys()) {
        if (known_keys.contains(key)) continue;
        if (key.rfind("attack.", 0) == 0) {
            const std::size_t dot = key.find('.', 7);
            if (dot != std::string::npos) {
                std::size_t index = 0;
                const std::string index_str = key.substr(7, dot - 7);
                try {
                    index = std::stoul(index_str);
                } catch (const std::exception&) {
                    throw std::invalid_argument("bad attack index in key: " + key);
                }
                const std::string field = key.substr(dot + 1);
                if (index >= cfg.attacks.size()) cfg.attacks.resize(index + 1, bulk);
                if (field == "victim") {
                    cfg.attacks[index].victim_imsi = file.get_string(key, "");
                    continue;
                }
                if (field == "offset_km") {
                    cfg.attacks[index].offset_km = file.get_double(key, bulk.offset_km);
                    continue;
                }
                if (field == "event_count") {
                    cfg.attacks[index].event_count = file.get_uint(key, bulk.event_count);
                    continue;
                }
                if (field == "nas_fraction") {
                    cfg.attacks[index].nas_fraction = file.get_double(key, bulk.nas_fraction);
                    continue;
                }
            }
        }
        throw std::invalid_argument("unknown scenario key: " + key);
    }

    cfg.validate();
    return cfg;
}

namespace {

/// Handcrafted event for the corner scenarios.
SignalingEvent corner_event(std::int64_t ts, const std::string& imsi, const std::string& cell,
                            Trigger trigger, Plane event_plane,
                            std::optional<std::uint32_t> rtd) {
    SignalingEvent e;
    e.record_timestamp_ms = ts;
    e.imsi = imsi;
    e.imei = "350000000099999";
    e.current_cell_id = cell;
    e.start_collection_trigger = trigger;
    e.ho_fail_code = HoFailCode::none;
    e.first_rtd = rtd;
    e.last_rtd = rtd;
    e.plane = event_plane;
    return e;
}

} // namespace

std::vector<CornerScenario> corner_case_suite() {
    std::vector<CornerScenario> suite;

    DetectorConfig detector;
    detector.d_min_km = 25.0; // below the bounce distance so the RTD path is exercised
    detector.v_max_kmh = 160.0;
    QueueParams queue; // n=1000, m=1, init 20 km

    const double lat0 = 33.0;
    const double lon0 = -97.0;
    const double km_per_deg_lon = kKmPerDegLat * std::cos(lat0 * std::numbers::pi / 180.0);
    const std::string imsi = "310150000000001";
    const std::int64_t t0 = 1710374400000;

    // (a) Idle gap: 30 km apart after 30 silent minutes; fast-looking only if
    // the elapsed time is ignored.
    {
        CornerScenario sc;
        sc.name = "idle_gap";
        sc.detector = detector;
        sc.queue = queue;

        const GeoPoint c1(lat0, lon0);
        const GeoPoint c2(lat0, lon0 + 30.0 / km_per_deg_lon);
        sc.scenario.cells.add(CellSite{"C1", c1, bearing_deg(c1, c2), Morphology::suburban});
        sc.scenario.cells.add(CellSite{"C2", c2, bearing_deg(c2, c1), Morphology::suburban});

        const std::uint32_t rtd_near = rtd_units_from_km(0.3);
        sc.scenario.events = {
            corner_event(t0, imsi, "C1", Trigger::attach, Plane::nas, rtd_near),
            corner_event(t0 + 600000, imsi, "C1", Trigger::service_request, Plane::nas, rtd_near),
            corner_event(t0 + 600000 + 1800000, imsi, "C2", Trigger::service_request, Plane::nas,
                         rtd_near),
            corner_event(t0 + 600000 + 2400000, imsi, "C2", Trigger::service_request, Plane::nas,
                         rtd_near),
        };
        sc.scenario.labels = {EventLabel::legit, EventLabel::legit, EventLabel::corner_idle,
                              EventLabel::legit};
        sc.expected_min_findings = 0;
        sc.expected_max_findings = 0;
        suite.push_back(std::move(sc));
    }

    // (b)/(c) Distant-cell bounce: out to a cell 40 km away and back within
    // seconds. With RTD present the projections cancel the distance; with RTD
    // stripped the first pass must flag until the queue warms up.
    const auto make_bounce = [&](bool with_rtd) {
        CornerScenario sc;
        sc.name = with_rtd ? "distant_bounce_rtd" : "distant_bounce_no_rtd";
        sc.detector = detector;
        sc.queue = queue;

        const GeoPoint a(lat0, lon0);
        const GeoPoint b(lat0, lon0 + 40.0 / km_per_deg_lon);
        sc.scenario.cells.add(CellSite{"A", a, bearing_deg(a, b), Morphology::rural});
        sc.scenario.cells.add(CellSite{"B", b, bearing_deg(b, a), Morphology::rural});

        // UE sits 0.5 km from A on the line toward B.
        const GeoPoint ue(lat0, lon0 + 0.5 / km_per_deg_lon);
        const std::optional<std::uint32_t> rtd_a =
            with_rtd ? std::optional<std::uint32_t>(rtd_units_from_km(haversine_km(ue, a)))
                     : std::nullopt;
        const std::optional<std::uint32_t> rtd_b =
            with_rtd ? std::optional<std::uint32_t>(rtd_units_from_km(haversine_km(ue, b)))
                     : std::nullopt;

        sc.scenario.events = {
            corner_event(t0, imsi, "A", Trigger::attach, Plane::nas, rtd_a),
            corner_event(t0 + 600000, imsi, "A", Trigger::service_request, Plane::nas, rtd_a),
            corner_event(t0 + 610000, imsi, "B", Trigger::service_request, Plane::nas, rtd_b),
            corner_event(t0 + 625000, imsi, "A", Trigger::service_request, Plane::nas, rtd_a),
            corner_event(t0 + 1200000, imsi, "A", Trigger::service_request, Plane::nas, rtd_a),
        };
        sc.scenario.labels = {EventLabel::legit, EventLabel::legit, EventLabel::corner_bounce,
                              EventLabel::corner_bounce, EventLabel::legit};
        sc.expected_min_findings = with_rtd ? 0 : 1;
        sc.expected_max_findings = with_rtd ? 0 : 2;
        return sc;
    };
    suite.push_back(make_bounce(true));
    suite.push_back(make_bounce(false));

    return suite;
}

} // namespace locan
