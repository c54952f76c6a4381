#include <cmath>
#include <limits>

#include "doctest.h"
#include "locan/detector.hpp"

using locan::AnomalyFinding;
using locan::CompensationStore;
using locan::Detector;
using locan::DetectorConfig;
using locan::QueueParams;
using locan::Transition;

namespace {

locan::EventDataset flat_dataset() {
    locan::EventDataset ds;
    // No azimuths: RTD projections stay zero unless a test sets theta itself.
    ds.cells.add({"C1", locan::GeoPoint(33.0, -97.0), std::nullopt, locan::Morphology::urban});
    ds.cells.add({"C2", locan::GeoPoint(33.0, -94.0), std::nullopt, locan::Morphology::suburban});
    ds.cells.add({"C3", locan::GeoPoint(35.0, -94.0), std::nullopt, locan::Morphology::rural});
    ds.cells.add({"C7", locan::GeoPoint(35.0, -97.0), std::nullopt, locan::Morphology::urban});
    return ds;
}

locan::SignalingEvent ev(std::int64_t ts, const std::string& imsi, const std::string& cell,
                         locan::Trigger trigger = locan::Trigger::service_request,
                         locan::HoFailCode hfc = locan::HoFailCode::none) {
    locan::SignalingEvent e;
    e.record_timestamp_ms = ts;
    e.imsi = imsi;
    e.current_cell_id = cell;
    e.start_collection_trigger = trigger;
    e.ho_fail_code = hfc;
    e.plane = locan::Plane::nas;
    return e;
}

Transition tr_between(const locan::EventDataset& ds, std::uint64_t prev, std::uint64_t next,
                      double distance_km) {
    Transition tr;
    tr.imsi = ds.events[prev].imsi;
    tr.prev_ordinal = prev;
    tr.next_ordinal = next;
    tr.elapsed_s = static_cast<double>(ds.events[next].record_timestamp_ms -
                                       ds.events[prev].record_timestamp_ms) /
                   1000.0;
    tr.cell_distance_km = distance_km;
    return tr;
}

} // namespace

TEST_CASE("estimate_speed_kmh reference values") {
    Transition tr;
    tr.cell_distance_km = 200.0;
    tr.elapsed_s = 60.0;
    CHECK(locan::estimate_speed_kmh(tr, 16.0, 16.0, 0.0, 0.0) == doctest::Approx(11040.0));

    tr.cell_distance_km = 30.0;
    tr.elapsed_s = 1800.0;
    CHECK(locan::estimate_speed_kmh(tr, 0.0, 0.0, 0.0, 0.0) == doctest::Approx(60.0));

    // Compensation exceeding the distance gives a nonpositive estimate.
    tr.cell_distance_km = 10.0;
    tr.elapsed_s = 600.0;
    CHECK(locan::estimate_speed_kmh(tr, 20.0, 20.0, 0.0, 0.0) <= 0.0);

    // Zero elapsed time: unbounded.
    tr.elapsed_s = 0.0;
    CHECK(std::isinf(locan::estimate_speed_kmh(tr, 0.0, 0.0, 0.0, 0.0)));
}

TEST_CASE("estimate_speed_kmh is monotone nonincreasing in compensation") {
    Transition tr;
    tr.cell_distance_km = 120.0;
    tr.elapsed_s = 900.0;
    double prev = std::numeric_limits<double>::infinity();
    for (double c = 0.0; c <= 60.0; c += 2.5) {
        const double v = locan::estimate_speed_kmh(tr, c, c + 1.0, 0.0, 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("exclusion predicates") {
    DetectorConfig cfg;
    auto prev = ev(1000, "A", "C1");
    auto next = ev(2000, "A", "C7");

    SUBCASE("target match on the previous event") {
        prev.target_cell_id = "C7";
        const auto flags = locan::evaluate_exclusions(prev, next, cfg);
        CHECK(flags.o_tgt);
        CHECK_FALSE(flags.o_hfc);
        CHECK_FALSE(flags.o_sct);
        CHECK(flags.any());
    }
    SUBCASE("handover trigger on the incoming event") {
        next.start_collection_trigger = locan::Trigger::handover;
        CHECK(locan::evaluate_exclusions(prev, next, cfg).o_sct);
    }
    SUBCASE("handover fail code on the incoming event") {
        next.ho_fail_code = locan::HoFailCode::x2_ho;
        CHECK(locan::evaluate_exclusions(prev, next, cfg).o_hfc);
        next.ho_fail_code = locan::HoFailCode::failure_other;
        CHECK_FALSE(locan::evaluate_exclusions(prev, next, cfg).o_hfc);
    }
    SUBCASE("clean transition") {
        prev.target_cell_id = "C2"; // differs from next.current
        next.start_collection_trigger = locan::Trigger::attach;
        const auto flags = locan::evaluate_exclusions(prev, next, cfg);
        CHECK_FALSE(flags.any());
    }
    SUBCASE("previous event's own trigger does not exclude") {
        prev.start_collection_trigger = locan::Trigger::handover;
        prev.ho_fail_code = locan::HoFailCode::s1_ho;
        CHECK_FALSE(locan::evaluate_exclusions(prev, next, cfg).any());
    }
}

TEST_CASE("config thresholds and validation") {
    DetectorConfig cfg;
    cfg.morphology_overrides[{locan::Morphology::urban, locan::Morphology::rural}] =
        locan::Thresholds{220.0, 30.0};

    CHECK(cfg.thresholds_for(locan::Morphology::urban, locan::Morphology::urban).v_max_kmh ==
          160.0);
    // The pair is unordered.
    CHECK(cfg.thresholds_for(locan::Morphology::rural, locan::Morphology::urban).v_max_kmh ==
          220.0);
    CHECK(cfg.thresholds_for(locan::Morphology::urban, locan::Morphology::rural).d_min_km == 30.0);
    CHECK_NOTHROW(cfg.validate());

    DetectorConfig bad;
    bad.v_max_kmh = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.v_max_kmh = 160.0;
    bad.d_min_km = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("judge flags the spoof pattern") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C2")};

    QueueParams qp;
    CompensationStore store(qp);
    Detector detector(DetectorConfig{}, store);

    const Transition tr = tr_between(ds, 0, 1, 300.0);
    const auto finding = detector.judge(tr, ds);
    REQUIRE(finding.has_value());
    CHECK(finding->v_hat_kmh == doctest::Approx(33600.0));
    CHECK(finding->c_out_prev_km == 20.0);
    CHECK(finding->c_out_next_km == 20.0);
    CHECK(finding->prev_cell_id == "C1");
    CHECK(finding->next_cell_id == "C2");
    CHECK_FALSE(finding->exclusions.any());
}

TEST_CASE("judge excludes explained handovers despite raw speed") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(11000, "A", "C7")};
    ds.events[0].target_cell_id = "C7"; // a valid HO chain

    QueueParams qp;
    CompensationStore store(qp);
    Detector detector(DetectorConfig{}, store);

    const auto finding = detector.judge(tr_between(ds, 0, 1, 5.0 + 300.0), ds);
    CHECK_FALSE(finding.has_value());
    // The excluded transition still fed the incoming cell's queue.
    CHECK(store.find("C7") != nullptr);
    CHECK(store.find("C7")->size() == 1);
}

TEST_CASE("judge applies strict inequalities at the boundary") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C2")};

    DetectorConfig cfg;
    QueueParams qp;
    CompensationStore store(qp);
    Detector detector(cfg, store);

    // Distance exactly at the floor: not a finding no matter the speed.
    const auto at_floor = detector.judge(tr_between(ds, 0, 1, cfg.d_min_km), ds);
    CHECK_FALSE(at_floor.has_value());
}

TEST_CASE("judge reads compensation before pushing") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C2")};

    QueueParams qp;
    qp.tolerance_m = 0;
    CompensationStore store(qp);
    // Pre-warm the incoming cell's queue with a known maximum.
    store.queue_for("C2").push(7.5);

    Detector detector(DetectorConfig{}, store);
    const auto finding = detector.judge(tr_between(ds, 0, 1, 300.0), ds);
    REQUIRE(finding.has_value());
    // The read saw the pre-push maximum, not this transition's own sample.
    CHECK(finding->c_out_next_km == 7.5);
    CHECK(store.find("C2")->size() == 2);
}

TEST_CASE("judge caches the incoming read for the next transition") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C2"), ev(61000, "A", "C3")};

    QueueParams qp;
    qp.tolerance_m = 0;
    CompensationStore store(qp);
    Detector detector(DetectorConfig{}, store);

    const auto first = detector.judge(tr_between(ds, 0, 1, 300.0), ds);
    REQUIRE(first.has_value());
    CHECK(first->c_out_next_km == 20.0); // C2 empty at read time

    // C2's queue now holds the first transition's large sample; the cached
    // pre-push value must be used for the second transition's previous side.
    const auto second = detector.judge(tr_between(ds, 1, 2, 250.0), ds);
    REQUIRE(second.has_value());
    CHECK(second->c_out_prev_km == 20.0);
    CHECK(store.find("C2")->read_c_out() > 20.0); // a fresh read would differ
}

TEST_CASE("judge falls back to a fresh read after a same-cell run") {
    locan::EventDataset ds = flat_dataset();
    // A -> B transition, then B -> B (no transition), then B -> C3.
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C2"), ev(41000, "A", "C2"),
                 ev(71000, "A", "C3")};

    QueueParams qp;
    qp.tolerance_m = 0;
    CompensationStore store(qp);
    Detector detector(DetectorConfig{}, store);

    const Transition out_tr = tr_between(ds, 0, 1, 300.0);
    const auto first = detector.judge(out_tr, ds);
    REQUIRE(first.has_value());
    const double pushed = locan::compute_c_in(out_tr, 0.0, 0.0, 160.0);

    // The previous event of this transition is ordinal 2, which was never an
    // incoming event; the judge re-reads C2's queue, now holding the push.
    const auto second = detector.judge(tr_between(ds, 2, 3, 250.0), ds);
    REQUIRE(second.has_value());
    CHECK(second->c_out_prev_km == doctest::Approx(pushed));
}

TEST_CASE("judge rejects unknown cells as internal errors") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(2000, "A", "C2")};
    Transition tr = tr_between(ds, 0, 1, 10.0);
    tr.next_ordinal = 99; // out of range

    QueueParams qp;
    CompensationStore store(qp);
    Detector detector(DetectorConfig{}, store);
    CHECK_THROWS_AS(static_cast<void>(detector.judge(tr, ds)), std::logic_error);
}

TEST_CASE("morphology overrides change the judged thresholds") {
    locan::EventDataset ds = flat_dataset();
    ds.events = {ev(1000, "A", "C1"), ev(31000, "A", "C3")}; // urban -> rural

    DetectorConfig cfg;
    cfg.morphology_overrides[{locan::Morphology::urban, locan::Morphology::rural}] =
        locan::Thresholds{160.0, 400.0}; // hoist the floor above the distance

    QueueParams qp;
    CompensationStore store(qp);
    Detector detector(cfg, store);
    CHECK_FALSE(detector.judge(tr_between(ds, 0, 1, 300.0), ds).has_value());

    // Same transition under the default floor is a finding.
    CompensationStore store2(qp);
    Detector default_detector(DetectorConfig{}, store2);
    CHECK(default_detector.judge(tr_between(ds, 0, 1, 300.0), ds).has_value());
}
