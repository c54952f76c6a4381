// locan: synthetic-day simulator and location-anomaly detector for cellular
// signaling event streams. Subcommands: simulate, detect, bench, report.
//
// Diagnostics go to stderr; stdout carries data only. Exit codes: 0 clean,
// 1 error, 2 (detect) findings present.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "locan/detector.hpp"
#include "locan/event_model.hpp"
#include "locan/flat_config.hpp"
#include "locan/pipeline.hpp"
#include "locan/serialize.hpp"
#include "locan/simulator.hpp"

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (const unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string file_checksum(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    char out[32];
    std::snprintf(out, sizeof(out), "%016llx",
                  static_cast<unsigned long long>(fnv1a(buffer.str())));
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(',', start);
        if (pos == std::string::npos) {
            if (start < s.size()) out.push_back(s.substr(start));
            break;
        }
        if (pos > start) out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

struct DetectOptions {
    std::string cells_path;
    std::string events_path;
    std::string out_dir = ".";
    std::string config_path;
    double v_max_kmh = 0.0;     // 0 = not set on the command line
    double d_min_km = -1.0;     // -1 = not set
    std::uint64_t queue_n = 0;  // 0 = not set
    std::int64_t queue_m = -1;  // -1 = not set
    double init_comp_km = -1.0; // -1 = not set
    bool no_prefilter = false;
    unsigned workers = 0;       // 0 = not set (defaults to hardware)
    bool redact = false;
    std::string dump_queues_path;
};

/// Precedence: command-line flag > config file > built-in default.
locan::PipelineConfig resolve_pipeline_config(const DetectOptions& opt, const CLI::App* cmd) {
    locan::PipelineConfig cfg;
    bool workers_set = false;

    if (!opt.config_path.empty()) {
        const locan::FlatConfig file = locan::FlatConfig::load(opt.config_path);
        cfg.detector.v_max_kmh = file.get_double("v_max_kmh", cfg.detector.v_max_kmh);
        cfg.detector.d_min_km = file.get_double("d_min_km", cfg.detector.d_min_km);
        cfg.queue.capacity_n = file.get_uint("queue_n", cfg.queue.capacity_n);
        cfg.queue.tolerance_m = file.get_uint("queue_m", cfg.queue.tolerance_m);
        cfg.queue.init_value_km = file.get_double("init_comp_km", cfg.queue.init_value_km);
        cfg.prefilter_enabled = file.get_bool("prefilter", cfg.prefilter_enabled);
        if (file.has("workers")) {
            cfg.workers = static_cast<unsigned>(file.get_uint("workers", cfg.workers));
            workers_set = true;
        }

        if (file.has("ho_fail_codes_indicating_ho")) {
            cfg.detector.ho_fail_codes_indicating_ho.clear();
            for (const std::string& item : split_list(file.get_string("ho_fail_codes_indicating_ho", ""))) {
                cfg.detector.ho_fail_codes_indicating_ho.insert(
                    locan::ho_fail_code_from_string(item));
            }
        }
        if (file.has("triggers_involving_ho")) {
            cfg.detector.triggers_involving_ho.clear();
            for (const std::string& item : split_list(file.get_string("triggers_involving_ho", ""))) {
                cfg.detector.triggers_involving_ho.insert(locan::trigger_from_string(item));
            }
        }

        // override.<morph>.<morph>.v_max_kmh / .d_min_km
        for (const std::string& key : file.keys()) {
            if (key.rfind("override.", 0) != 0) continue;
            const std::size_t dot1 = key.find('.', 9);
            const std::size_t dot2 = dot1 == std::string::npos ? std::string::npos
                                                               : key.find('.', dot1 + 1);
            if (dot1 == std::string::npos || dot2 == std::string::npos) {
                throw std::invalid_argument("bad override key: " + key);
            }
            locan::Morphology a = locan::morphology_from_string(key.substr(9, dot1 - 9));
            locan::Morphology b =
                locan::morphology_from_string(key.substr(dot1 + 1, dot2 - dot1 - 1));
            if (static_cast<int>(b) < static_cast<int>(a)) std::swap(a, b);
            const std::string field = key.substr(dot2 + 1);
            auto [it, inserted] = cfg.detector.morphology_overrides.try_emplace(
                {a, b}, locan::Thresholds{cfg.detector.v_max_kmh, cfg.detector.d_min_km});
            if (field == "v_max_kmh") {
                it->second.v_max_kmh = file.get_double(key, it->second.v_max_kmh);
            } else if (field == "d_min_km") {
                it->second.d_min_km = file.get_double(key, it->second.d_min_km);
            } else {
                throw std::invalid_argument("bad override field in key: " + key);
            }
        }
    }

    if (cmd->count("--vmax") > 0) cfg.detector.v_max_kmh = opt.v_max_kmh;
    if (cmd->count("--dmin") > 0) cfg.detector.d_min_km = opt.d_min_km;
    if (cmd->count("--queue-n") > 0) cfg.queue.capacity_n = opt.queue_n;
    if (cmd->count("--queue-m") > 0) cfg.queue.tolerance_m = static_cast<std::size_t>(opt.queue_m);
    if (cmd->count("--init-comp") > 0) cfg.queue.init_value_km = opt.init_comp_km;
    if (opt.no_prefilter) cfg.prefilter_enabled = false;
    if (cmd->count("--workers") > 0) {
        cfg.workers = opt.workers;
        workers_set = true;
    }
    if (!workers_set || cfg.workers == 0) {
        cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    }
    cfg.queue_dump_path = opt.dump_queues_path;

    cfg.detector.validate();
    cfg.queue.validate();
    return cfg;
}

void print_effective_config(const locan::PipelineConfig& cfg, bool redact) {
    std::cerr << "config: v_max_kmh=" << cfg.detector.v_max_kmh
              << " d_min_km=" << cfg.detector.d_min_km
              << " queue_n=" << cfg.queue.capacity_n
              << " queue_m=" << cfg.queue.tolerance_m
              << " init_comp_km=" << cfg.queue.init_value_km
              << " prefilter=" << (cfg.prefilter_enabled ? "on" : "off")
              << " workers=" << cfg.workers
              << " redact=" << (redact ? "on" : "off") << "\n";
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 std::uint64_t seed, bool seed_given) {
    locan::ScenarioConfig cfg = locan::load_scenario_config(scenario_path);
    if (seed_given) cfg.seed = seed;

    std::cerr << "scenario: seed=" << cfg.seed << " cells=" << cfg.cell_count
              << " fleet=" << cfg.fleet_size << " duration_h=" << cfg.duration_hours
              << " attacks=" << cfg.attacks.size() << "\n";

    const locan::GeneratedScenario scenario = locan::generate(cfg);
    for (const std::string& warning : scenario.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    locan::write_scenario_csv(scenario, out_dir);

    const fs::path dir(out_dir);
    std::cout << "cells=" << scenario.cells.size() << "\n"
              << "events=" << scenario.events.size() << "\n"
              << "spoofed_imsis=" << scenario.spoofed_imsis.size() << "\n"
              << "reconnection_ratio=" << scenario.stats.reconnection_ratio() << "\n"
              << "max_trace_speed_kmh=" << scenario.stats.max_trace_speed_kmh << "\n"
              << "cells_csv_checksum=" << file_checksum(dir / "cells.csv") << "\n"
              << "events_csv_checksum=" << file_checksum(dir / "events.csv") << "\n"
              << "ground_truth_csv_checksum=" << file_checksum(dir / "ground_truth.csv") << "\n";
    return 0;
}

struct LoadedInputs {
    locan::EventDataset dataset;
    locan::QuarantineReport quarantine;
};

LoadedInputs load_inputs(const std::string& cells_path, const std::string& events_path) {
    locan::CellCatalog cells = locan::load_cells(cells_path);
    locan::LoadResult loaded = locan::load_events(events_path, std::move(cells));
    if (loaded.quarantine.quarantined > 0) {
        std::cerr << "quarantined " << loaded.quarantine.quarantined << " of "
                  << loaded.quarantine.total_rows << " rows (unknown cell references)\n";
    }
    return {std::move(loaded.dataset), loaded.quarantine};
}

int cmd_detect(const DetectOptions& opt, const CLI::App* cmd) {
    const locan::PipelineConfig cfg = resolve_pipeline_config(opt, cmd);
    print_effective_config(cfg, opt.redact);

    LoadedInputs inputs = load_inputs(opt.cells_path, opt.events_path);
    const locan::PipelineReport report = locan::run(inputs.dataset, cfg);

    fs::create_directories(opt.out_dir);
    const std::string report_json = locan::report_to_json(report, cfg);
    write_file(fs::path(opt.out_dir) / "report.json", report_json);
    write_file(fs::path(opt.out_dir) / "findings.jsonl",
               locan::findings_to_jsonl(report.findings, opt.redact));

    std::cout << report_json;
    return report.findings.empty() ? 0 : 2;
}

int cmd_bench(const DetectOptions& opt, const CLI::App* cmd, const std::string& scenario_path,
              unsigned repeat) {
    const locan::PipelineConfig base_cfg = resolve_pipeline_config(opt, cmd);
    print_effective_config(base_cfg, opt.redact);

    locan::EventDataset dataset;
    if (!scenario_path.empty()) {
        std::cerr << "generating scenario from " << scenario_path << "\n";
        dataset = locan::generate(locan::load_scenario_config(scenario_path)).to_dataset();
    } else {
        dataset = load_inputs(opt.cells_path, opt.events_path).dataset;
    }

    const auto run_once = [&](bool prefilter) {
        locan::PipelineConfig cfg = base_cfg;
        cfg.prefilter_enabled = prefilter;
        return locan::run(dataset, cfg);
    };

    double best_with = 0.0, best_without = 0.0;
    std::size_t findings_with = 0, findings_without = 0;
    std::size_t imsis = 0;
    for (unsigned r = 0; r < std::max(1u, repeat); ++r) {
        const locan::PipelineReport with = run_once(true);
        const locan::PipelineReport without = run_once(false);
        if (r == 0 || with.timings.total_s < best_with) best_with = with.timings.total_s;
        if (r == 0 || without.timings.total_s < best_without) best_without = without.timings.total_s;
        findings_with = with.findings.size();
        findings_without = without.findings.size();
        imsis = with.i_all_count;
    }

    const double speedup = best_with > 0.0 ? best_without / best_with : 0.0;
    std::ostringstream csv;
    csv << "events,imsis,with_prefilter_s,without_prefilter_s,speedup,findings_with,"
           "findings_without\n"
        << dataset.events.size() << ',' << imsis << ',' << best_with << ',' << best_without << ','
        << speedup << ',' << findings_with << ',' << findings_without << "\n";

    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "bench.csv", csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_report(const std::vector<std::string>& report_paths, const std::string& out_dir) {
    std::ostringstream csv;
    csv << "source,active_devices,prefiltered_devices,anomalous_devices,findings\n";
    for (const std::string& path : report_paths) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open report: " + path);
        }
        nlohmann::json j;
        in >> j;
        csv << fs::path(path).stem().string() << ','
            << j.value("i_all_count", 0ULL) << ','
            << j.value("i_nas_count", 0ULL) << ','
            << j.value("i_final_count", 0ULL) << ','
            << j.value("findings_count", 0ULL) << "\n";
    }
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "summary.csv", csv.str());
    std::cout << csv.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location anomaly detection over cellular signaling events"};
    app.require_subcommand(1);

    // simulate
    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic day");
    simulate->add_option("--scenario", scenario_path, "Scenario config file (key = value)")
        ->required();
    simulate->add_option("--out", out_dir, "Output directory");
    CLI::Option* seed_opt = simulate->add_option("--seed", seed, "Override the scenario seed");

    // detect
    DetectOptions det;
    CLI::App* detect = app.add_subcommand("detect", "Run detection over a day of events");
    detect->add_option("--cells", det.cells_path, "cells.csv path")->required();
    detect->add_option("--events", det.events_path, "events.csv path")->required();
    detect->add_option("--out", det.out_dir, "Output directory");
    detect->add_option("--config", det.config_path, "Detector config file (key = value)");
    detect->add_option("--vmax", det.v_max_kmh, "Speed ceiling, km/h");
    detect->add_option("--dmin", det.d_min_km, "Distance floor, km");
    detect->add_option("--queue-n", det.queue_n, "Compensation queue capacity");
    detect->add_option("--queue-m", det.queue_m, "Compensation queue tolerance");
    detect->add_option("--init-comp", det.init_comp_km, "Initial compensation, km");
    detect->add_flag("--no-prefilter", det.no_prefilter, "Judge all active identifiers");
    detect->add_option("--workers", det.workers, "Worker threads (0 = hardware)");
    detect->add_flag("--redact", det.redact, "Omit cell ids from findings");
    detect->add_option("--dump-queues", det.dump_queues_path,
                       "Write the post-run compensation queue snapshot CSV here");

    // bench
    DetectOptions bench_opt;
    std::string bench_scenario;
    unsigned bench_repeat = 1;
    CLI::App* bench = app.add_subcommand("bench", "Time detection with and without the pre-filter");
    bench->add_option("--cells", bench_opt.cells_path, "cells.csv path");
    bench->add_option("--events", bench_opt.events_path, "events.csv path");
    bench->add_option("--scenario", bench_scenario, "Generate the dataset from this scenario");
    bench->add_option("--out", bench_opt.out_dir, "Output directory");
    bench->add_option("--config", bench_opt.config_path, "Detector config file");
    bench->add_option("--vmax", bench_opt.v_max_kmh, "Speed ceiling, km/h");
    bench->add_option("--dmin", bench_opt.d_min_km, "Distance floor, km");
    bench->add_option("--queue-n", bench_opt.queue_n, "Compensation queue capacity");
    bench->add_option("--queue-m", bench_opt.queue_m, "Compensation queue tolerance");
    bench->add_option("--init-comp", bench_opt.init_comp_km, "Initial compensation, km");
    bench->add_option("--workers", bench_opt.workers, "Worker threads (0 = hardware)");
    bench->add_option("--repeat", bench_repeat, "Repetitions; best time wins");

    // report
    std::vector<std::string> report_paths;
    std::string report_out = ".";
    CLI::App* report = app.add_subcommand("report", "Summarize detection reports as CSV");
    report->add_option("reports", report_paths, "report.json files")->required();
    report->add_option("--out", report_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(scenario_path, out_dir, seed, seed_opt->count() > 0);
        }
        if (detect->parsed()) {
            return cmd_detect(det, detect);
        }
        if (bench->parsed()) {
            if (bench_scenario.empty() && (bench_opt.cells_path.empty() || bench_opt.events_path.empty())) {
                std::cerr << "error: bench needs --scenario or both --cells and --events\n";
                return 1;
            }
            return cmd_bench(bench_opt, bench, bench_scenario, bench_repeat);
        }
        if (report->parsed()) {
            return cmd_report(report_paths, report_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
