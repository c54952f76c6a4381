#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "locan/geo.hpp"

namespace locan {

enum class Morphology { urban, suburban, rural };

enum class Trigger { handover, rrc_reestablishment, attach, service_request, other };

enum class HoFailCode { none, intra_ho, inter_ho, x2_ho, s1_ho, failure_other };

enum class Plane { nas, ran_other };

const char* to_string(Morphology m);
const char* to_string(Trigger t);
const char* to_string(HoFailCode c);
const char* to_string(Plane p);

Morphology morphology_from_string(const std::string& s);
Trigger trigger_from_string(const std::string& s);
HoFailCode ho_fail_code_from_string(const std::string& s);
Plane plane_from_string(const std::string& s);

/// A tower/sector: geodetic position, optional antenna azimuth, morphology class.
struct CellSite {
    std::string cell_id;
    GeoPoint position;
    std::optional<double> antenna_azimuth_deg; // [0, 360) when present
    Morphology morphology = Morphology::suburban;

    friend bool operator==(const CellSite&, const CellSite&) = default;
};

/// Cell sites keyed by id. Ids are unique; inserting a duplicate throws.
class CellCatalog {
public:
    void add(CellSite site);
    const CellSite* find(const std::string& cell_id) const;
    const CellSite& at(const std::string& cell_id) const;
    bool contains(const std::string& cell_id) const { return find(cell_id) != nullptr; }
    std::size_t size() const { return sites_.size(); }
    const std::vector<CellSite>& sites() const { return sites_; }

private:
    std::vector<CellSite> sites_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// One RAN or NAS record tied to an identifier and a cell.
struct SignalingEvent {
    std::int64_t record_timestamp_ms = 0; // epoch milliseconds, > 0
    std::string imsi;
    std::optional<std::string> imei;
    std::string current_cell_id;
    std::optional<std::string> target_cell_id;
    std::optional<std::string> source_cell_id;
    Trigger start_collection_trigger = Trigger::other;
    HoFailCode ho_fail_code = HoFailCode::none;
    std::optional<std::uint32_t> first_rtd; // LTE T_s units
    std::optional<std::uint32_t> last_rtd;  // LTE T_s units
    Plane plane = Plane::ran_other;

    friend bool operator==(const SignalingEvent&, const SignalingEvent&) = default;
};

/// Events in file order (the position is the event's stable ordinal) plus the
/// cell catalog they reference. Immutable once loaded.
struct EventDataset {
    std::vector<SignalingEvent> events;
    CellCatalog cells;
};

/// Rows excluded at ingestion because a cell reference did not resolve.
struct QuarantineReport {
    std::size_t total_rows = 0;
    std::size_t accepted = 0;
    std::size_t quarantined = 0;
    std::vector<std::size_t> quarantined_lines; // 1-based file line numbers
};

struct LoadResult {
    EventDataset dataset;
    QuarantineReport quarantine;
};

/// Ingestion failure: carries the file and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::filesystem::path& path, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Loads `cell_id,lat,lon,azimuth_deg,morphology` (azimuth_deg may be empty).
/// Malformed rows and duplicate ids raise ParseError.
CellCatalog load_cells(const std::filesystem::path& path);

/// Loads the events CSV (see README for the schema). Events referencing
/// unknown cells are quarantined, not fatal; malformed rows raise ParseError.
LoadResult load_events(const std::filesystem::path& path, CellCatalog cells);

/// Max of the RTD fields that are present; absent when both are absent.
std::optional<std::uint32_t> effective_rtd(const SignalingEvent& e);

inline const char* cells_csv_header() {
    return "cell_id,lat,lon,azimuth_deg,morphology";
}

inline const char* events_csv_header() {
    return "record_timestamp_ms,imsi,imei,current_cell_id,target_cell_id,source_cell_id,"
           "start_collection_trigger,ho_fail_code,first_rtd,last_rtd,plane";
}

} // namespace locan
