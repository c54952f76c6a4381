#include <benchmark/benchmark.h>

#include <random>

#include "locan/geo.hpp"
#include "locan/pipeline.hpp"
#include "locan/rtd_comp.hpp"
#include "locan/simulator.hpp"
#include "locan/trajectory.hpp"

namespace {

const locan::EventDataset& bench_dataset() {
    static const locan::EventDataset ds = [] {
        locan::ScenarioConfig cfg;
        cfg.seed = 1234;
        cfg.fleet_size = 4000;
        cfg.cell_count = 400;
        cfg.duration_hours = 2.0;
        for (int k = 0; k < 4; ++k) {
            locan::AttackSpec attack;
            attack.offset_km = 320.0;
            cfg.attacks.push_back(attack);
        }
        return locan::generate(cfg).to_dataset();
    }();
    return ds;
}

void BM_HaversineKm(benchmark::State& state) {
    std::mt19937_64 rng(7);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<locan::GeoPoint, locan::GeoPoint>> pairs;
    for (int i = 0; i < 1024; ++i) {
        pairs.emplace_back(locan::GeoPoint(-80.0 + unit() * 160.0, -180.0 + unit() * 360.0),
                           locan::GeoPoint(-80.0 + unit() * 160.0, -180.0 + unit() * 360.0));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(locan::haversine_km(a, b));
    }
}
BENCHMARK(BM_HaversineKm);

void BM_BearingDeg(benchmark::State& state) {
    const locan::GeoPoint a(33.0, -97.0);
    const locan::GeoPoint b(34.5, -95.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(locan::bearing_deg(a, b));
    }
}
BENCHMARK(BM_BearingDeg);

void BM_QueuePushRead(benchmark::State& state) {
    locan::QueueParams p;
    p.capacity_n = static_cast<std::size_t>(state.range(0));
    p.tolerance_m = 1;
    locan::CompensationQueue q(p);
    std::mt19937_64 rng(3);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto _ : state) {
        q.push(unit() * 100.0 - 40.0);
        benchmark::DoNotOptimize(q.read_c_out());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QueuePushRead)->Arg(1000)->Arg(400000);

void BM_BuildIndex(benchmark::State& state) {
    const locan::EventDataset& ds = bench_dataset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            locan::build_index(ds, nullptr, static_cast<unsigned>(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * ds.events.size());
}
BENCHMARK(BM_BuildIndex)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_NasPrefilter(benchmark::State& state) {
    const locan::EventDataset& ds = bench_dataset();
    const auto active = locan::extract_active(ds);
    const locan::DetectorConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(locan::nas_prefilter(ds, active, cfg, 2));
    }
    state.SetItemsProcessed(state.iterations() * ds.events.size());
}
BENCHMARK(BM_NasPrefilter)->Unit(benchmark::kMillisecond);

void BM_PipelineRun(benchmark::State& state) {
    const locan::EventDataset& ds = bench_dataset();
    locan::PipelineConfig cfg;
    cfg.prefilter_enabled = state.range(0) != 0;
    cfg.workers = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(locan::run(ds, cfg));
    }
    state.SetItemsProcessed(state.iterations() * ds.events.size());
}
BENCHMARK(BM_PipelineRun)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
