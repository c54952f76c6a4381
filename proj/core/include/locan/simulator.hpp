#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "locan/detector.hpp"
#include "locan/event_model.hpp"
#include "locan/rtd_comp.hpp"

namespace locan {

enum class AzimuthMode { random, sectors, absent };

AzimuthMode azimuth_mode_from_string(const std::string& s);
const char* to_string(AzimuthMode m);

enum class EventLabel { legit, spoof, corner_idle, corner_bounce };

EventLabel event_label_from_string(const std::string& s);
const char* to_string(EventLabel l);

struct AttackSpec {
    std::string victim_imsi;   // empty: auto-assigned from the fleet
    double offset_km = 300.0;
    std::size_t event_count = 6;
    double nas_fraction = 0.5; // applied as an exact rounded count, spread evenly
};

/// Deterministic synthetic-day parameters. Distances in km, speeds in km/h,
/// durations in the named units. See README for the config-file keys.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::int64_t start_timestamp_ms = 1710374400000;

    // Region bounding box and cell grid.
    double region_lat_min = 32.5;
    double region_lat_max = 33.5;
    double region_lon_min = -97.5;
    double region_lon_max = -96.5;
    std::size_t cell_count = 400;
    double cell_spacing_km = 5.0;
    double morphology_urban = 0.3;
    double morphology_suburban = 0.5;
    double morphology_rural = 0.2;
    AzimuthMode azimuth_mode = AzimuthMode::random;

    // Fleet and motion.
    std::size_t fleet_size = 100;
    double duration_hours = 24.0;
    double legit_v_max_kmh = 120.0;
    double min_speed_kmh = 20.0;
    double waypoint_dwell_min_s = 60.0;
    double waypoint_dwell_max_s = 7200.0;
    double idle_probability = 0.4;

    // Modem behavior.
    double reconnection_ratio = 0.9; // share of cell changes that are not HOs
    double keepalive_min_gap_s = 450.0;
    double keepalive_max_gap_s = 900.0;
    double nas_fraction = 0.35;      // share of non-HO events on the NAS plane
    double rtd_noise_km = 0.3;
    double rtd_missing_prob = 0.05;
    double mountain_cell_fraction = 0.0; // cells with one-sided negative RTD bias
    double mountain_bias_km = 2.0;
    double distant_bounce_rate = 0.0;    // per-emission chance of a far-cell excursion
    double bounce_offset_km = 40.0;

    std::vector<AttackSpec> attacks;

    void validate() const; // throws std::invalid_argument naming the field
};

struct ScenarioStats {
    double max_trace_speed_kmh = 0.0; // from the motion trace, not from events
    std::size_t handover_transitions = 0;
    std::size_t reconnection_transitions = 0;
    std::size_t bounce_excursions = 0;
    std::size_t attacker_events = 0;

    double reconnection_ratio() const {
        const std::size_t total = handover_transitions + reconnection_transitions;
        return total == 0 ? 0.0 : static_cast<double>(reconnection_transitions) / total;
    }
};

struct GeneratedScenario {
    CellCatalog cells;
    std::vector<SignalingEvent> events; // sorted by timestamp; position = ordinal
    std::vector<EventLabel> labels;     // parallel to events
    std::unordered_set<std::string> spoofed_imsis;
    ScenarioStats stats;
    std::vector<std::string> warnings;

    EventDataset to_dataset() const&;
    EventDataset to_dataset() &&;
};

/// Generates the scenario: cell grid, fleet motion, modem events, corner
/// behaviors, then the configured spoof injections. Identical config
/// (including seed) yields identical output.
GeneratedScenario generate(const ScenarioConfig& cfg);

struct SpoofSchedule {
    std::int64_t start_ms = 0;       // first attacker event
    std::int64_t window_ms = 300000; // attacker events spread over this window
    std::size_t event_count = 6;
    double nas_fraction = 0.5;
};

/// Interleaves attacker events on new cells ~offset_km from the victim's
/// position into an existing time-sorted stream. The victim's own events keep
/// flowing around the window, producing the out-and-back signature. Appends a
/// warning (rather than failing) when the offset is below the default
/// detection distance floor.
void inject_spoof(GeneratedScenario& scenario, const std::string& victim_imsi, double offset_km,
                  const SpoofSchedule& schedule, std::uint64_t seed);

/// Writes cells.csv, events.csv and ground_truth.csv into the directory.
void write_scenario_csv(const GeneratedScenario& scenario, const std::filesystem::path& dir);

/// Parses a flat key = value scenario file (unknown keys are errors).
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// A fixed corner-condition scenario with the detector settings it is meant
/// to run under and the expected finding-count range.
struct CornerScenario {
    std::string name;
    GeneratedScenario scenario;
    DetectorConfig detector;
    QueueParams queue;
    std::size_t expected_min_findings = 0;
    std::size_t expected_max_findings = 0;
};

/// The named corner bundle: an idle gap that looks fast but is not, a
/// distant-cell bounce explained away by RTD projections, and the same bounce
/// with RTD stripped, which must flag until the queue warms up.
std::vector<CornerScenario> corner_case_suite();

} // namespace locan
