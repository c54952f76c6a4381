#include "locan/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "locan/geo.hpp"
#include "locan/trajectory.hpp"

namespace locan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Raw speed of a NAS pair, km/h; zero elapsed counts as unbounded.
double raw_speed_kmh(double distance_km, double elapsed_s) {
    if (elapsed_s == 0.0) return std::numeric_limits<double>::infinity();
    return distance_km / (elapsed_s / 3600.0);
}

template <typename Item, typename Fn>
void parallel_for(const std::vector<Item>& items, unsigned workers, Fn&& fn) {
    if (workers <= 1 || items.size() < 2) {
        for (std::size_t i = 0; i < items.size(); ++i) fn(i);
        return;
    }
    const unsigned n = static_cast<unsigned>(
        std::min<std::size_t>(workers, items.size()));
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < items.size(); i += n) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

std::unordered_set<std::string> extract_active(const EventDataset& ds) {
    std::unordered_set<std::string> active;
    std::unordered_map<std::string, const std::string*> first_nas_cell;
    for (const SignalingEvent& e : ds.events) {
        if (e.plane != Plane::nas) continue;
        auto [it, inserted] = first_nas_cell.emplace(e.imsi, &e.current_cell_id);
        if (!inserted && *it->second != e.current_cell_id) {
            active.insert(e.imsi);
        }
    }
    return active;
}

std::unordered_set<std::string> nas_prefilter(const EventDataset& ds,
                                              const std::unordered_set<std::string>& i_all,
                                              const DetectorConfig& cfg,
                                              unsigned workers) {
    // NAS-only trajectories for the active identifiers.
    std::unordered_map<std::string, std::vector<std::uint64_t>> nas_seqs;
    nas_seqs.reserve(i_all.size());
    for (std::uint64_t ordinal = 0; ordinal < ds.events.size(); ++ordinal) {
        const SignalingEvent& e = ds.events[ordinal];
        if (e.plane != Plane::nas || !i_all.contains(e.imsi)) continue;
        nas_seqs[e.imsi].push_back(ordinal);
    }

    std::vector<std::pair<const std::string*, std::vector<std::uint64_t>*>> items;
    items.reserve(nas_seqs.size());
    for (auto& [imsi, seq] : nas_seqs) items.emplace_back(&imsi, &seq);

    std::unordered_set<std::string> kept;
    std::mutex kept_mutex;

    parallel_for(items, workers, [&](std::size_t i) {
        auto& seq = *items[i].second;
        std::stable_sort(seq.begin(), seq.end(), [&ds](std::uint64_t a, std::uint64_t b) {
            return ds.events[a].record_timestamp_ms < ds.events[b].record_timestamp_ms;
        });
        for (std::size_t k = 1; k < seq.size(); ++k) {
            const SignalingEvent& prev = ds.events[seq[k - 1]];
            const SignalingEvent& next = ds.events[seq[k]];
            if (prev.current_cell_id == next.current_cell_id) continue;
            const CellSite& prev_cell = ds.cells.at(prev.current_cell_id);
            const CellSite& next_cell = ds.cells.at(next.current_cell_id);
            const Thresholds th = cfg.thresholds_for(prev_cell.morphology, next_cell.morphology);
            const double d = haversine_km(prev_cell.position, next_cell.position);
            if (d <= th.d_min_km) continue;
            const double elapsed_s =
                static_cast<double>(next.record_timestamp_ms - prev.record_timestamp_ms) / 1000.0;
            if (raw_speed_kmh(d, elapsed_s) > th.v_max_kmh) {
                std::lock_guard<std::mutex> lock(kept_mutex);
                kept.insert(*items[i].first);
                return;
            }
        }
    });
    return kept;
}

DetectionResult full_detection(const EventDataset& ds,
                               const std::unordered_set<std::string>& target_imsis,
                               const DetectorConfig& cfg, CompensationStore& store,
                               unsigned workers) {
    DetectionResult result;
    if (target_imsis.empty()) return result;

    const TrajectoryIndex idx = build_index(ds, &target_imsis, workers);

    const std::vector<std::string> imsis = idx.imsis_sorted();
    std::vector<std::vector<Transition>> per_imsi(imsis.size());
    parallel_for(imsis, workers, [&](std::size_t i) {
        per_imsi[i] = transitions(idx, imsis[i], ds);
    });

    std::size_t total = 0;
    for (const auto& v : per_imsi) total += v.size();
    std::vector<Transition> all;
    all.reserve(total);
    for (auto& v : per_imsi) {
        std::move(v.begin(), v.end(), std::back_inserter(all));
    }

    // Global event-time order: by the incoming event's (timestamp, imsi,
    // ordinal). The key is unique per transition, so the result does not
    // depend on how the per-identifier pieces were concatenated.
    std::sort(all.begin(), all.end(), [&ds](const Transition& a, const Transition& b) {
        const auto ta = ds.events[a.next_ordinal].record_timestamp_ms;
        const auto tb = ds.events[b.next_ordinal].record_timestamp_ms;
        if (ta != tb) return ta < tb;
        if (a.imsi != b.imsi) return a.imsi < b.imsi;
        return a.next_ordinal < b.next_ordinal;
    });

    Detector detector(cfg, store);
    for (const Transition& tr : all) {
        if (auto finding = detector.judge(tr, ds)) {
            result.flagged_imsis.insert(finding->imsi);
            result.findings.push_back(std::move(*finding));
        }
    }
    return result;
}

PipelineReport run(const EventDataset& ds, const PipelineConfig& cfg) {
    cfg.detector.validate();
    cfg.queue.validate();

    PipelineReport report;
    report.prefilter_enabled = cfg.prefilter_enabled;
    const auto t_start = Clock::now();

    auto t_stage = Clock::now();
    const std::unordered_set<std::string> i_all = extract_active(ds);
    report.timings.extract_s = seconds_since(t_stage);
    report.i_all_count = i_all.size();

    std::unordered_set<std::string> i_nas;
    if (cfg.prefilter_enabled) {
        t_stage = Clock::now();
        i_nas = nas_prefilter(ds, i_all, cfg.detector, cfg.workers);
        report.timings.prefilter_s = seconds_since(t_stage);
        report.i_nas_count = i_nas.size();
    } else {
        report.i_nas_count = i_all.size();
    }

    const std::unordered_set<std::string>& judged = cfg.prefilter_enabled ? i_nas : i_all;

    t_stage = Clock::now();
    CompensationStore store(cfg.queue);
    DetectionResult detection = full_detection(ds, judged, cfg.detector, store, cfg.workers);
    report.timings.detect_s = seconds_since(t_stage);

    if (!cfg.queue_dump_path.empty()) {
        if (cfg.queue_dump_path.has_parent_path()) {
            std::filesystem::create_directories(cfg.queue_dump_path.parent_path());
        }
        std::ofstream dump(cfg.queue_dump_path);
        if (!dump) {
            throw std::runtime_error("cannot write queue snapshot: " +
                                     cfg.queue_dump_path.string());
        }
        store.dump_csv(dump);
    }

    report.peak_queue_cells = store.cell_count();
    report.i_final_count = detection.flagged_imsis.size();
    report.findings = std::move(detection.findings);
    report.flagged_imsis.assign(detection.flagged_imsis.begin(), detection.flagged_imsis.end());
    std::sort(report.flagged_imsis.begin(), report.flagged_imsis.end());

    // Subset chain I ⊆ I_NAS ⊆ I_all, checked on every run.
    for (const std::string& imsi : i_nas) {
        if (!i_all.contains(imsi)) {
            throw std::logic_error("subset chain violated: prefilter kept an inactive IMSI");
        }
    }
    for (const std::string& imsi : report.flagged_imsis) {
        if (!judged.contains(imsi)) {
            throw std::logic_error("subset chain violated: flagged IMSI was not judged");
        }
    }

    report.timings.total_s = seconds_since(t_start);
    return report;
}

} // namespace locan
