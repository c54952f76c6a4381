#include "locan/event_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>

namespace locan {

const char* to_string(Morphology m) {
    switch (m) {
    case Morphology::urban: return "urban";
    case Morphology::suburban: return "suburban";
    case Morphology::rural: return "rural";
    }
    return "?";
}

const char* to_string(Trigger t) {
    switch (t) {
    case Trigger::handover: return "handover";
    case Trigger::rrc_reestablishment: return "rrc_reestablishment";
    case Trigger::attach: return "attach";
    case Trigger::service_request: return "service_request";
    case Trigger::other: return "other";
    }
    return "?";
}

const char* to_string(HoFailCode c) {
    switch (c) {
    case HoFailCode::none: return "none";
    case HoFailCode::intra_ho: return "intra_ho";
    case HoFailCode::inter_ho: return "inter_ho";
    case HoFailCode::x2_ho: return "x2_ho";
    case HoFailCode::s1_ho: return "s1_ho";
    case HoFailCode::failure_other: return "failure_other";
    }
    return "?";
}

const char* to_string(Plane p) {
    switch (p) {
    case Plane::nas: return "nas";
    case Plane::ran_other: return "ran_other";
    }
    return "?";
}

Morphology morphology_from_string(const std::string& s) {
    if (s == "urban") return Morphology::urban;
    if (s == "suburban") return Morphology::suburban;
    if (s == "rural") return Morphology::rural;
    throw std::invalid_argument("unknown morphology: " + s);
}

Trigger trigger_from_string(const std::string& s) {
    if (s == "handover") return Trigger::handover;
    if (s == "rrc_reestablishment") return Trigger::rrc_reestablishment;
    if (s == "attach") return Trigger::attach;
    if (s == "service_request") return Trigger::service_request;
    if (s == "other") return Trigger::other;
    throw std::invalid_argument("unknown start_collection_trigger: " + s);
}

HoFailCode ho_fail_code_from_string(const std::string& s) {
    if (s == "none") return HoFailCode::none;
    if (s == "intra_ho") return HoFailCode::intra_ho;
    if (s == "inter_ho") return HoFailCode::inter_ho;
    if (s == "x2_ho") return HoFailCode::x2_ho;
    if (s == "s1_ho") return HoFailCode::s1_ho;
    if (s == "failure_other") return HoFailCode::failure_other;
    throw std::invalid_argument("unknown ho_fail_code: " + s);
}

Plane plane_from_string(const std::string& s) {
    if (s == "nas") return Plane::nas;
    if (s == "ran_other") return Plane::ran_other;
    throw std::invalid_argument("unknown plane: " + s);
}

void CellCatalog::add(CellSite site) {
    auto [it, inserted] = index_.emplace(site.cell_id, sites_.size());
    if (!inserted) {
        throw std::invalid_argument("duplicate cell_id: " + site.cell_id);
    }
    sites_.push_back(std::move(site));
}

const CellSite* CellCatalog::find(const std::string& cell_id) const {
    auto it = index_.find(cell_id);
    return it == index_.end() ? nullptr : &sites_[it->second];
}

const CellSite& CellCatalog::at(const std::string& cell_id) const {
    const CellSite* site = find(cell_id);
    if (site == nullptr) {
        throw std::out_of_range("unknown cell_id: " + cell_id);
    }
    return *site;
}

ParseError::ParseError(const std::filesystem::path& path, std::size_t line, const std::string& what)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line,
                    const char* field) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(path, line, std::string("bad ") + field + ": '" + s + "'");
    }
    return value;
}

std::int64_t parse_i64(const std::string& s, const std::filesystem::path& path, std::size_t line,
                       const char* field) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(path, line, std::string("bad ") + field + ": '" + s + "'");
    }
    return value;
}

std::optional<std::uint32_t> parse_optional_rtd(const std::string& s,
                                                const std::filesystem::path& path,
                                                std::size_t line, const char* field) {
    if (s.empty()) return std::nullopt;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(path, line, std::string("bad ") + field + ": '" + s + "'");
    }
    if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(path, line, std::string(field) + " does not fit in 32 bits: '" + s + "'");
    }
    return static_cast<std::uint32_t>(value);
}

std::optional<std::string> optional_field(std::string s) {
    if (s.empty()) return std::nullopt;
    return s;
}

} // namespace

CellCatalog load_cells(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path, 1, "missing header");
    }
    if (strip_cr(line) != cells_csv_header()) {
        throw ParseError(path, 1, std::string("bad header, expected: ") + cells_csv_header());
    }

    CellCatalog catalog;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw ParseError(path, line_no, "expected 5 fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ParseError(path, line_no, "empty cell_id");
        }
        const double lat = parse_double(fields[1], path, line_no, "lat");
        const double lon = parse_double(fields[2], path, line_no, "lon");
        std::optional<double> azimuth;
        if (!fields[3].empty()) {
            const double az = parse_double(fields[3], path, line_no, "azimuth_deg");
            if (!(az >= 0.0 && az < 360.0)) {
                throw ParseError(path, line_no, "azimuth_deg out of [0, 360): '" + fields[3] + "'");
            }
            azimuth = az;
        }
        try {
            CellSite site{fields[0], GeoPoint(lat, lon), azimuth, morphology_from_string(fields[4])};
            catalog.add(std::move(site));
        } catch (const std::out_of_range& e) {
            throw ParseError(path, line_no, e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, line_no, e.what());
        }
    }
    return catalog;
}

LoadResult load_events(const std::filesystem::path& path, CellCatalog cells) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path, 1, "missing header");
    }
    if (strip_cr(line) != events_csv_header()) {
        throw ParseError(path, 1, std::string("bad header, expected: ") + events_csv_header());
    }

    LoadResult result;
    result.dataset.cells = std::move(cells);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        ++result.quarantine.total_rows;

        const auto fields = split_csv_line(line);
        if (fields.size() != 11) {
            throw ParseError(path, line_no, "expected 11 fields, got " + std::to_string(fields.size()));
        }

        SignalingEvent e;
        e.record_timestamp_ms = parse_i64(fields[0], path, line_no, "record_timestamp_ms");
        if (e.record_timestamp_ms <= 0) {
            throw ParseError(path, line_no, "record_timestamp_ms must be positive");
        }
        if (fields[1].empty()) {
            throw ParseError(path, line_no, "empty imsi");
        }
        e.imsi = fields[1];
        e.imei = optional_field(fields[2]);
        if (fields[3].empty()) {
            throw ParseError(path, line_no, "empty current_cell_id");
        }
        e.current_cell_id = fields[3];
        e.target_cell_id = optional_field(fields[4]);
        e.source_cell_id = optional_field(fields[5]);
        try {
            e.start_collection_trigger = trigger_from_string(fields[6]);
            e.ho_fail_code = ho_fail_code_from_string(fields[7]);
            e.plane = plane_from_string(fields[10]);
        } catch (const std::invalid_argument& err) {
            throw ParseError(path, line_no, err.what());
        }
        e.first_rtd = parse_optional_rtd(fields[8], path, line_no, "first_rtd");
        e.last_rtd = parse_optional_rtd(fields[9], path, line_no, "last_rtd");

        const bool resolves = result.dataset.cells.contains(e.current_cell_id) &&
                              (!e.target_cell_id || result.dataset.cells.contains(*e.target_cell_id)) &&
                              (!e.source_cell_id || result.dataset.cells.contains(*e.source_cell_id));
        if (!resolves) {
            ++result.quarantine.quarantined;
            result.quarantine.quarantined_lines.push_back(line_no);
            continue;
        }

        result.dataset.events.push_back(std::move(e));
        ++result.quarantine.accepted;
    }
    return result;
}

std::optional<std::uint32_t> effective_rtd(const SignalingEvent& e) {
    if (e.first_rtd && e.last_rtd) return std::max(*e.first_rtd, *e.last_rtd);
    if (e.first_rtd) return e.first_rtd;
    return e.last_rtd;
}

} // namespace locan
