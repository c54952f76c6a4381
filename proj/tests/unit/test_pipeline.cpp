#include <random>

#include "doctest.h"
#include "locan/pipeline.hpp"
#include "locan/serialize.hpp"
#include "../support/datasets.hpp"
#include "../support/oracles.hpp"

namespace {

locan::EventDataset spread_dataset() {
    locan::EventDataset ds;
    // Roughly 50 km between neighbors, 300+ km across.
    ds.cells.add({"C1", locan::GeoPoint(33.0, -97.0), std::nullopt, locan::Morphology::urban});
    ds.cells.add({"C2", locan::GeoPoint(33.0, -96.5), std::nullopt, locan::Morphology::urban});
    ds.cells.add({"C3", locan::GeoPoint(33.0, -93.5), std::nullopt, locan::Morphology::rural});
    return ds;
}

locan::SignalingEvent ev(std::int64_t ts, const std::string& imsi, const std::string& cell,
                         locan::Plane plane,
                         locan::Trigger trigger = locan::Trigger::service_request) {
    locan::SignalingEvent e;
    e.record_timestamp_ms = ts;
    e.imsi = imsi;
    e.current_cell_id = cell;
    e.start_collection_trigger = trigger;
    e.plane = plane;
    return e;
}

} // namespace

TEST_CASE("extract_active needs NAS events on two distinct cells") {
    locan::EventDataset ds = spread_dataset();
    ds.events = {
        ev(1000, "MOVED", "C1", locan::Plane::nas),
        ev(2000, "MOVED", "C2", locan::Plane::nas),
        ev(1000, "PARKED", "C1", locan::Plane::nas),
        ev(2000, "PARKED", "C1", locan::Plane::nas),
        ev(1000, "RAN_ONLY", "C1", locan::Plane::ran_other),
        ev(2000, "RAN_ONLY", "C2", locan::Plane::ran_other),
        ev(3000, "MIXED", "C1", locan::Plane::nas),
        ev(4000, "MIXED", "C2", locan::Plane::ran_other),
    };
    const auto active = locan::extract_active(ds);
    CHECK(active == std::unordered_set<std::string>{"MOVED"});
}

TEST_CASE("nas_prefilter keeps raw threshold violations only") {
    locan::EventDataset ds = spread_dataset();
    const std::int64_t t0 = 1710374400000;
    ds.events = {
        // 300 km in 30 s: raw speed 36000 km/h.
        ev(t0, "SPOOFED", "C1", locan::Plane::nas),
        ev(t0 + 30000, "SPOOFED", "C3", locan::Plane::nas),
        // ~47 km in 30 minutes: 94 km/h, below the ceiling.
        ev(t0, "LEGIT", "C1", locan::Plane::nas),
        ev(t0 + 1800000, "LEGIT", "C2", locan::Plane::nas),
        // 300 km NAS jump explained by a handover: the pre-filter must keep it
        // anyway (it ignores handover evidence by design).
        ev(t0, "HOJUMP", "C1", locan::Plane::nas),
        ev(t0 + 30000, "HOJUMP", "C3", locan::Plane::nas, locan::Trigger::handover),
    };
    const auto active = locan::extract_active(ds);
    CHECK(active.size() == 3);
    const auto kept = locan::nas_prefilter(ds, active, locan::DetectorConfig{});
    CHECK(kept == std::unordered_set<std::string>{"SPOOFED", "HOJUMP"});
}

TEST_CASE("pipeline run produces the subset chain and exact counts") {
    locan::EventDataset ds = spread_dataset();
    const std::int64_t t0 = 1710374400000;
    ds.events = {
        ev(t0, "SPOOFED", "C1", locan::Plane::nas),
        ev(t0 + 30000, "SPOOFED", "C3", locan::Plane::nas),
        ev(t0 + 60000, "SPOOFED", "C1", locan::Plane::nas),
        ev(t0, "LEGIT", "C1", locan::Plane::nas),
        ev(t0 + 1800000, "LEGIT", "C2", locan::Plane::nas),
        // The handover-explained jump survives the pre-filter but must be
        // removed by the full criterion.
        ev(t0, "HOJUMP", "C1", locan::Plane::nas),
        ev(t0 + 30000, "HOJUMP", "C3", locan::Plane::nas, locan::Trigger::handover),
    };

    locan::PipelineConfig cfg;
    const locan::PipelineReport report = locan::run(ds, cfg);
    CHECK(report.i_all_count == 3);
    CHECK(report.i_nas_count == 2);
    CHECK(report.i_final_count == 1);
    CHECK(report.flagged_imsis == std::vector<std::string>{"SPOOFED"});
    CHECK(report.findings.size() == 2); // out and back
    CHECK(report.peak_queue_cells >= 2);
    CHECK(report.i_final_count <= report.i_nas_count);
    CHECK(report.i_nas_count <= report.i_all_count);
}

TEST_CASE("empty dataset reports zeros") {
    locan::EventDataset ds = spread_dataset();
    locan::PipelineConfig cfg;
    const locan::PipelineReport report = locan::run(ds, cfg);
    CHECK(report.i_all_count == 0);
    CHECK(report.i_nas_count == 0);
    CHECK(report.i_final_count == 0);
    CHECK(report.findings.empty());
}

TEST_CASE("disabling the prefilter widens the judged set") {
    locan::EventDataset ds = spread_dataset();
    const std::int64_t t0 = 1710374400000;
    // The anomalous jump happens between RAN-plane events only; NAS events
    // exist on two cells (so the identifier is active) but are slow.
    ds.events = {
        ev(t0, "STEALTH", "C1", locan::Plane::nas),
        ev(t0 + 1800000, "STEALTH", "C2", locan::Plane::nas),
        ev(t0 + 3600000, "STEALTH", "C1", locan::Plane::ran_other),
        ev(t0 + 3630000, "STEALTH", "C3", locan::Plane::ran_other),
    };

    locan::PipelineConfig with;
    const locan::PipelineReport filtered = locan::run(ds, with);
    CHECK(filtered.i_final_count == 0);
    CHECK(filtered.i_nas_count == 0);

    locan::PipelineConfig without;
    without.prefilter_enabled = false;
    const locan::PipelineReport baseline = locan::run(ds, without);
    CHECK(baseline.i_final_count == 1);
    CHECK(baseline.i_nas_count == baseline.i_all_count);
    CHECK(baseline.flagged_imsis == std::vector<std::string>{"STEALTH"});
}

TEST_CASE("pipeline matches the naive oracle on random mini-days") {
    std::mt19937_64 rng(20240314);
    for (int trial = 0; trial < 40; ++trial) {
        const locan::EventDataset ds = testsupport::random_mini_dataset(rng);

        locan::PipelineConfig cfg;
        cfg.prefilter_enabled = false;
        cfg.queue.capacity_n = 8; // small so eviction and underfill both occur
        cfg.queue.tolerance_m = trial % 3;
        cfg.workers = 1 + trial % 4;

        const locan::PipelineReport report = locan::run(ds, cfg);
        const auto expected = oracle::naive_detect(ds, cfg.detector, cfg.queue);

        REQUIRE(report.findings.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(report.findings[i].imsi == expected[i].imsi);
            CHECK(report.findings[i].prev_ordinal == expected[i].prev_ordinal);
            CHECK(report.findings[i].next_ordinal == expected[i].next_ordinal);
            if (std::isfinite(expected[i].v_hat_kmh)) {
                CHECK(report.findings[i].v_hat_kmh ==
                      doctest::Approx(expected[i].v_hat_kmh).epsilon(1e-9));
            } else {
                CHECK_FALSE(std::isfinite(report.findings[i].v_hat_kmh));
            }
        }
    }
}

TEST_CASE("runs are deterministic across repeats and worker counts") {
    std::mt19937_64 rng(424242);
    const locan::EventDataset ds = testsupport::random_mini_dataset(rng, 30, 20, 800);

    locan::PipelineConfig cfg;
    cfg.prefilter_enabled = false;
    cfg.queue.capacity_n = 16;

    cfg.workers = 1;
    const locan::PipelineReport first = locan::run(ds, cfg);
    const locan::PipelineReport second = locan::run(ds, cfg);
    cfg.workers = 4;
    const locan::PipelineReport parallel = locan::run(ds, cfg);

    const std::string a = locan::findings_to_jsonl(first.findings);
    CHECK(a == locan::findings_to_jsonl(second.findings));
    CHECK(a == locan::findings_to_jsonl(parallel.findings));
    CHECK(first.flagged_imsis == parallel.flagged_imsis);
    CHECK(first.i_all_count == parallel.i_all_count);
    CHECK(first.i_nas_count == parallel.i_nas_count);
}

TEST_CASE("findings serialize with stable fields and redaction") {
    locan::EventDataset ds = spread_dataset();
    const std::int64_t t0 = 1710374400000;
    ds.events = {
        ev(t0, "SPOOFED", "C1", locan::Plane::nas),
        ev(t0 + 30000, "SPOOFED", "C3", locan::Plane::nas),
    };
    locan::PipelineConfig cfg;
    const locan::PipelineReport report = locan::run(ds, cfg);
    REQUIRE(report.findings.size() == 1);

    const std::string plain = locan::findings_to_jsonl(report.findings, false);
    CHECK(plain.find("\"prev_cell_id\":\"C1\"") != std::string::npos);
    CHECK(plain.find("\"v_hat_kmh\"") != std::string::npos);

    const std::string redacted = locan::findings_to_jsonl(report.findings, true);
    CHECK(redacted.find("cell_id") == std::string::npos);
    CHECK(redacted.find("C1") == std::string::npos);
    CHECK(redacted.find("C3") == std::string::npos);
    CHECK(redacted.find("\"imsi\":\"SPOOFED\"") != std::string::npos);

    const std::string report_json = locan::report_to_json(report, cfg);
    CHECK(report_json.find("\"i_all_count\": 1") != std::string::npos);
    CHECK(report_json.find("\"prefilter_enabled\": true") != std::string::npos);
}

TEST_CASE("zero elapsed transitions serialize v_hat as null") {
    locan::EventDataset ds = spread_dataset();
    const std::int64_t t0 = 1710374400000;
    ds.events = {
        ev(t0, "TWIN", "C1", locan::Plane::nas),
        ev(t0, "TWIN", "C3", locan::Plane::nas), // same instant, 300 km apart
    };
    locan::PipelineConfig cfg;
    const locan::PipelineReport report = locan::run(ds, cfg);
    REQUIRE(report.findings.size() == 1);
    const std::string line = locan::findings_to_jsonl(report.findings);
    CHECK(line.find("\"v_hat_kmh\":null") != std::string::npos);
}
