#include "lfperf/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "lfperf/config.hpp"
#include "lfperf/csv.hpp"
#include "lfperf/harness/bench.hpp"
#include "lfperf/harness/calibrate.hpp"
#include "lfperf/model.hpp"
#include "lfperf/sim/simulator.hpp"
#include "lfperf/sim/stats.hpp"

namespace lfperf {

namespace {

// Bad input from the user's files or flags; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string workload_file, platform_file, out_file;
    std::string structure = "ll", layout = "padded";
    int load_factor = 1, h_max = 0, node_size = 0;
    std::int64_t pages = 0;
    double freq_ghz = 1.0;
    std::uint64_t seed = 1;
};

void add_inputs(CLI::App* app, Common& c, bool platform_required = true) {
    app->add_option("-w,--workload", c.workload_file, "workload config")->required()->check(CLI::ExistingFile);
    auto* p = app->add_option("-p,--platform", c.platform_file, "platform config")->check(CLI::ExistingFile);
    if (platform_required) p->required();
    app->add_option("-s,--structure", c.structure, "ll | ht | sl | bst")->capture_default_str();
    app->add_option("--layout", c.layout, "padded | packed")->capture_default_str();
    app->add_option("--load-factor", c.load_factor, "hash table keys per bucket")->capture_default_str();
    app->add_option("--h-max", c.h_max, "skip-list max height (0 = ceil(log2 R))");
    app->add_option("--node-size", c.node_size, "node bytes (0 = per-structure default)");
    app->add_option("--pages", c.pages, "pages holding the structure (0 = derived)");
    app->add_option("--freq-ghz", c.freq_ghz, "cycles-to-seconds factor for ops/s columns")->capture_default_str();
    app->add_option("-o,--out", c.out_file, "output file (default stdout)");
}

StructureSpec structure_of(const Common& c) {
    StructureSpec s;
    try {
        s.kind = parse_structure_kind(c.structure);
        s.layout = parse_layout(c.layout);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    s.load_factor = c.load_factor;
    s.h_max = c.h_max;
    s.node_size = c.node_size;
    s.pages = c.pages;
    if (s.kind == StructureKind::LinkedList) s.load_factor = 1;
    return s;
}

PlatformSpec platform_of(const Common& c) {
    if (c.platform_file.empty()) return PlatformSpec{};
    return load_platform(c.platform_file);
}

// Writes to --out or the given stream.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& f) {
    if (path.empty() || path == "-") {
        f(fallback);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    f(os);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<Key> parse_keys(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

ScenarioRow predict_row(const WorkloadSpec& ws, const StructureSpec& ss, const PlatformSpec& p, double hz) {
    const Workload w(ws);
    const Prediction pr = predict(w, ss, p);
    ScenarioRow row = describe_scenario(ws, ss);
    row.predicted_ops_s = pr.solution.ops_per_second(hz);
    row.A = pr.solution.A;
    row.Bq = pr.solution.Bq;
    row.events_per_op = pr.solution.events_per_op;
    return row;
}

struct SimOpts {
    std::size_t ops = 20000, warmup = 20000;
    std::string placement = "random";
    int seeds = 1;
};

sim::Placement placement_of(const std::string& s) {
    if (s == "random") return sim::Placement::Random;
    if (s == "sequential") return sim::Placement::Sequential;
    throw UsageError("unknown placement '" + s + "'");
}

// Mean simulated throughput (ops/cycle) over `seeds` consecutive seeds.
double simulate_mean(const WorkloadSpec& ws, const StructureSpec& ss, const PlatformSpec& p, const SimOpts& o,
                     std::uint64_t seed) {
    double sum = 0.0;
    for (int i = 0; i < o.seeds; ++i) {
        sim::SimConfig c;
        c.workload = ws;
        c.structure = ss;
        c.platform = p;
        c.seed = seed + static_cast<std::uint64_t>(i);
        c.ops_per_thread = o.ops;
        c.warmup_ops_per_thread = o.warmup;
        c.placement = placement_of(o.placement);
        sum += sim::simulate_full(c).throughput;
    }
    return sum / o.seeds;
}

std::vector<PoissonRow> ks_rows(const std::map<Key, std::vector<double>>& gaps, std::size_t min_samples) {
    std::vector<PoissonRow> rows;
    for (const auto& [k, g] : gaps) {
        if (g.size() < min_samples) {
            throw std::runtime_error("key " + std::to_string(k) + ": only " + std::to_string(g.size()) +
                                     " inter-arrival samples (need " + std::to_string(min_samples) + ")");
        }
        rows.push_back({k, sim::ks_exponential(g)});
    }
    return rows;
}

std::vector<ScenarioRow> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return read_scenarios(in, path);
    } catch (const CsvError& e) {
        throw UsageError(e.what());
    }
}

void print_summary(std::ostream& os, const char* what, const ErrorSummary& s) {
    if (s.n == 0) return;
    os << what << ": n=" << s.n << " |err| min=" << format_double(s.min) << " p50=" << format_double(s.p50)
       << " p90=" << format_double(s.p90) << " max=" << format_double(s.max) << " mean=" << format_double(s.mean_abs)
       << " within10%=" << format_double(s.within_10pct) << "\n";
}

}  // namespace

int run_cli(int argc, char** argv) { return run_cli(argc, argv, std::cout, std::cerr); }

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Throughput model, simulator and benchmark for lock-free search structures", "lfperf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lfperf 0.1.0");

    // predict
    Common pc;
    std::vector<int> sweep_threads;
    std::string dump_rates, dump_latency;
    auto* predict_cmd = app.add_subcommand("predict", "analytical throughput");
    add_inputs(predict_cmd, pc);
    predict_cmd->add_option("--sweep-threads", sweep_threads, "thread counts, one row each")->delimiter(',');
    predict_cmd->add_option("--dump-rates", dump_rates, "per-node event rates CSV (first thread count)");
    predict_cmd->add_option("--dump-latency", dump_latency, "per-node latency factors CSV (first thread count)");

    // simulate
    Common sc;
    SimOpts so;
    std::vector<std::int64_t> sim_track;
    std::string sim_gaps;
    auto* sim_cmd = app.add_subcommand("simulate", "discrete-event simulation");
    add_inputs(sim_cmd, sc);
    sim_cmd->add_option("--seed", sc.seed)->capture_default_str();
    sim_cmd->add_option("--seeds", so.seeds, "average over this many consecutive seeds")->capture_default_str();
    sim_cmd->add_option("--ops", so.ops, "measured operations per thread")->capture_default_str();
    sim_cmd->add_option("--warmup-ops", so.warmup, "warmup operations per thread")->capture_default_str();
    sim_cmd->add_option("--placement", so.placement, "random | sequential")->capture_default_str();
    sim_cmd->add_option("--track", sim_track, "keys whose inter-arrival gaps are recorded")->delimiter(',');
    sim_cmd->add_option("--interarrival", sim_gaps, "gap CSV for the tracked keys");

    // bench
    Common bc;
    double warmup_s = 0.5, measure_s = 2.0;
    std::vector<std::int64_t> bench_track;
    std::vector<int> pin_cpus;
    bool no_pin = false;
    std::uint64_t app_delay = 0;
    std::string bench_gaps;
    auto* bench_cmd = app.add_subcommand("bench", "run the lock-free structures on this machine");
    add_inputs(bench_cmd, bc, false);
    bench_cmd->add_option("--seed", bc.seed)->capture_default_str();
    bench_cmd->add_option("--warmup", warmup_s, "seconds")->capture_default_str();
    bench_cmd->add_option("--measure", measure_s, "seconds")->capture_default_str();
    bench_cmd->add_option("--track", bench_track, "keys whose inter-arrival gaps are recorded")->delimiter(',');
    bench_cmd->add_option("--interarrival", bench_gaps, "gap CSV for the tracked keys (counter ticks)");
    bench_cmd->add_option("--cpus", pin_cpus, "cpu per thread")->delimiter(',');
    bench_cmd->add_flag("--no-pin", no_pin, "leave thread placement to the OS");
    bench_cmd->add_option("--app-delay", app_delay, "busy ticks between operations")->capture_default_str();

    // calibrate
    harness::CalibrateOptions co;
    std::string cal_out;
    auto* cal_cmd = app.add_subcommand("calibrate", "measure platform latencies and write platform.cfg");
    cal_cmd->add_option("-o,--out", cal_out, "platform config path (default stdout)");
    cal_cmd->add_option("--probe-ms", co.probe_ms)->capture_default_str();
    cal_cmd->add_option("--repeats", co.repeats)->capture_default_str();
    cal_cmd->add_option("--cpu-home", co.cpu_home, "cpu running the single-thread probes");
    cal_cmd->add_option("--cpu-same", co.cpu_same_socket, "partner cpu on the same socket");
    cal_cmd->add_option("--cpu-other", co.cpu_other_socket, "partner cpu on another socket");

    // poisson-check
    Common qc;
    SimOpts qo;
    std::string source;
    std::vector<std::int64_t> q_keys;
    std::string q_gaps;
    std::size_t min_samples = 100;
    double q_warmup = 0.5, q_measure = 2.0;
    bool q_no_pin = false;
    auto* pois_cmd = app.add_subcommand("poisson-check", "KS test of tracked-key inter-arrivals against an exponential");
    pois_cmd->add_option("source", source, "sim | bench")->required()->check(CLI::IsMember({"sim", "bench"}));
    add_inputs(pois_cmd, qc, false);
    pois_cmd->add_option("--keys", q_keys, "tracked keys")->required()->delimiter(',');
    pois_cmd->add_option("--gaps", q_gaps, "raw gap CSV for plotting");
    pois_cmd->add_option("--min-samples", min_samples)->capture_default_str();
    pois_cmd->add_option("--seed", qc.seed)->capture_default_str();
    pois_cmd->add_option("--ops", qo.ops, "sim: measured operations per thread")->capture_default_str();
    pois_cmd->add_option("--warmup-ops", qo.warmup, "sim: warmup operations per thread")->capture_default_str();
    pois_cmd->add_option("--warmup", q_warmup, "bench: seconds")->capture_default_str();
    pois_cmd->add_option("--measure", q_measure, "bench: seconds")->capture_default_str();
    pois_cmd->add_flag("--no-pin", q_no_pin, "bench: leave thread placement to the OS");

    // compare
    std::vector<std::string> cmp_files;
    std::string cmp_out;
    auto* cmp_cmd = app.add_subcommand("compare", "merge scenario CSVs and report relative errors");
    cmp_cmd->add_option("files", cmp_files, "scenario CSVs")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("-o,--out", cmp_out, "merged CSV (default stdout); summary goes to stderr");

    // sweep
    Common wc;
    SimOpts wo;
    std::vector<std::string> w_structs = {"ll", "ht", "sl", "bst"}, w_layouts = {"padded"};
    std::vector<std::int64_t> w_ranges;
    std::vector<double> w_updates;
    std::vector<int> w_threads;
    bool w_sim = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "scenario grid: predictions and optionally simulations");
    add_inputs(sweep_cmd, wc);
    sweep_cmd->add_option("--structures", w_structs)->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--ranges", w_ranges, "key ranges (default: the workload's)")->delimiter(',');
    sweep_cmd->add_option("--update-pcts", w_updates, "balanced update percentages")->delimiter(',');
    sweep_cmd->add_option("--threads", w_threads, "thread counts")->delimiter(',');
    sweep_cmd->add_option("--layouts", w_layouts)->delimiter(',')->capture_default_str();
    sweep_cmd->add_flag("--sim", w_sim, "also fill sim_ops_s");
    sweep_cmd->add_option("--seed", wc.seed)->capture_default_str();
    sweep_cmd->add_option("--seeds", wo.seeds, "simulation seeds averaged per point")->capture_default_str();
    sweep_cmd->add_option("--ops", wo.ops)->capture_default_str();
    sweep_cmd->add_option("--warmup-ops", wo.warmup)->capture_default_str();
    sweep_cmd->add_option("--placement", wo.placement)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*predict_cmd) {
            WorkloadSpec ws = load_workload(pc.workload_file);
            const PlatformSpec plat = platform_of(pc);
            const StructureSpec ss = structure_of(pc);
            if (sweep_threads.empty()) sweep_threads.push_back(ws.threads);
            std::vector<ScenarioRow> rows;
            for (std::size_t i = 0; i < sweep_threads.size(); ++i) {
                ws.threads = sweep_threads[i];
                const Workload w(ws);
                const Prediction pr = predict(w, ss, plat);
                ScenarioRow row = describe_scenario(ws, ss);
                row.predicted_ops_s = pr.solution.ops_per_second(pc.freq_ghz * 1e9);
                row.A = pr.solution.A;
                row.Bq = pr.solution.Bq;
                row.events_per_op = pr.solution.events_per_op;
                rows.push_back(row);
                if (i == 0 && !dump_rates.empty()) emit(dump_rates, out, [&](std::ostream& os) { write_rates(os, pr.rates); });
                if (i == 0 && !dump_latency.empty()) {
                    emit(dump_latency, out, [&](std::ostream& os) { write_latency(os, pr.rates, pr.profile); });
                }
            }
            emit(pc.out_file, out, [&](std::ostream& os) { write_scenarios(os, rows); });
        } else if (*sim_cmd) {
            const WorkloadSpec ws = load_workload(sc.workload_file);
            const PlatformSpec plat = platform_of(sc);
            const StructureSpec ss = structure_of(sc);
            ScenarioRow row = describe_scenario(ws, ss);
            if (so.seeds < 1) throw UsageError("--seeds must be >= 1");
            if (!sim_track.empty() || !sim_gaps.empty()) {
                if (sim_track.empty()) throw UsageError("--interarrival needs --track");
                sim::SimConfig c;
                c.workload = ws;
                c.structure = ss;
                c.platform = plat;
                c.seed = sc.seed;
                c.ops_per_thread = so.ops;
                c.warmup_ops_per_thread = so.warmup;
                c.placement = placement_of(so.placement);
                c.tracked_keys = parse_keys(sim_track);
                const auto rep = sim::simulate_full(c);
                row.sim_ops_s = rep.throughput * sc.freq_ghz * 1e9;
                if (!sim_gaps.empty()) emit(sim_gaps, out, [&](std::ostream& os) { write_gaps(os, rep.interarrival); });
            } else {
                row.sim_ops_s = simulate_mean(ws, ss, plat, so, sc.seed) * sc.freq_ghz * 1e9;
            }
            emit(sc.out_file, out, [&](std::ostream& os) { write_scenarios(os, {row}); });
        } else if (*bench_cmd) {
            harness::BenchConfig cfg;
            cfg.workload = load_workload(bc.workload_file);
            cfg.platform = platform_of(bc);
            if (bc.platform_file.empty()) {
                cfg.platform.cores_per_socket = std::max(1, cfg.workload.threads);
                cfg.platform.data_cache_levels = {{512, 4}};
                cfg.platform.t_cas_by_sockets = {{1, 0.0}};
            }
            cfg.structure = structure_of(bc);
            cfg.warmup_seconds = warmup_s;
            cfg.measure_seconds = measure_s;
            cfg.tracked_keys = parse_keys(bench_track);
            cfg.pinning = pin_cpus;
            cfg.pin = !no_pin;
            cfg.app_delay_cycles = app_delay;
            cfg.seed = bc.seed;
            if (!bench_gaps.empty() && bench_track.empty()) throw UsageError("--interarrival needs --track");
            const auto rep = harness::run_bench(cfg);
            ScenarioRow row = describe_scenario(cfg.workload, cfg.structure);
            row.measured_ops_s = rep.ops_per_second;
            if (!bench_gaps.empty()) emit(bench_gaps, out, [&](std::ostream& os) { write_gaps(os, rep.interarrival); });
            emit(bc.out_file, out, [&](std::ostream& os) { write_scenarios(os, {row}); });
            err << "bench: " << format_double(rep.ops_per_second) << " ops/s over " << format_double(rep.seconds)
                << " s; retired " << rep.reclamation.retired << ", freed " << rep.reclamation.freed
                << "; counter " << format_double(rep.cycles_per_second) << " ticks/s\n";
        } else if (*cal_cmd) {
            const auto res = harness::calibrate(co);
            for (const auto& w : res.warnings) err << "warning: " << w << "\n";
            emit(cal_out, out, [&](std::ostream& os) {
                os << "# measured by `lfperf calibrate`; latencies in counter ticks\n";
                os << "# counter rate " << format_double(res.ticks_per_second)
                   << " ticks/s; pass --freq-ghz " << format_double(res.ticks_per_second / 1e9)
                   << " to report ops/s\n";
                for (const auto& w : res.warnings) os << "# warning: " << w << "\n";
                os << platform_to_config(res.platform);
            });
        } else if (*pois_cmd) {
            const WorkloadSpec ws = load_workload(qc.workload_file);
            const StructureSpec ss = structure_of(qc);
            const std::vector<Key> keys = parse_keys(q_keys);
            std::map<Key, std::vector<double>> gaps;
            if (source == "sim") {
                if (qc.platform_file.empty()) throw UsageError("poisson-check sim needs --platform");
                sim::SimConfig c;
                c.workload = ws;
                c.structure = ss;
                c.platform = platform_of(qc);
                c.seed = qc.seed;
                c.ops_per_thread = qo.ops;
                c.warmup_ops_per_thread = qo.warmup;
                c.tracked_keys = keys;
                gaps = sim::simulate_full(c).interarrival;
            } else {
                harness::BenchConfig cfg;
                cfg.workload = ws;
                cfg.platform = platform_of(qc);
                if (qc.platform_file.empty()) {
                    cfg.platform.cores_per_socket = std::max(1, ws.threads);
                    cfg.platform.data_cache_levels = {{512, 4}};
                    cfg.platform.t_cas_by_sockets = {{1, 0.0}};
                }
                cfg.structure = ss;
                cfg.warmup_seconds = q_warmup;
                cfg.measure_seconds = q_measure;
                cfg.tracked_keys = keys;
                cfg.pin = !q_no_pin;
                cfg.seed = qc.seed;
                gaps = harness::run_bench(cfg).interarrival;
            }
            if (!q_gaps.empty()) emit(q_gaps, out, [&](std::ostream& os) { write_gaps(os, gaps); });
            const auto rows = ks_rows(gaps, min_samples);
            emit(qc.out_file, out, [&](std::ostream& os) { write_poisson(os, rows); });
        } else if (*cmp_cmd) {
            std::vector<std::vector<ScenarioRow>> files;
            for (const auto& f : cmp_files) files.push_back(read_csv_file(f));
            std::vector<CompareRow> merged;
            try {
                merged = merge_scenarios(files);
            } catch (const CsvError& e) {
                throw UsageError(e.what());
            }
            emit(cmp_out, out, [&](std::ostream& os) { write_compare(os, merged); });
            std::vector<std::optional<double>> es, em;
            for (const auto& r : merged) {
                es.push_back(r.rel_err_sim);
                em.push_back(r.rel_err_measured);
            }
            print_summary(err, "predicted vs sim", summarize(es));
            print_summary(err, "predicted vs measured", summarize(em));
        } else if (*sweep_cmd) {
            const WorkloadSpec base = load_workload(wc.workload_file);
            const PlatformSpec plat = platform_of(wc);
            if (wo.seeds < 1) throw UsageError("--seeds must be >= 1");
            if (w_ranges.empty()) w_ranges.push_back(base.key_range);
            if (w_threads.empty()) w_threads.push_back(base.threads);
            std::vector<OpMix> mixes;
            if (w_updates.empty()) {
                mixes.push_back(base.op_mix);
            } else {
                for (double u : w_updates) mixes.push_back(BalancedMix{u / 100.0});
            }
            std::vector<ScenarioRow> rows;
            const double hz = wc.freq_ghz * 1e9;
            for (const auto& st : w_structs) {
                for (const auto& lay : w_layouts) {
                    Common c = wc;
                    c.structure = st;
                    c.layout = lay;
                    const StructureSpec ss = structure_of(c);
                    for (std::int64_t r : w_ranges) {
                        for (const auto& mix : mixes) {
                            for (int t : w_threads) {
                                WorkloadSpec ws = base;
                                ws.key_range = r;
                                ws.op_mix = mix;
                                ws.threads = t;
                                ws.per_key_override.clear();
                                ScenarioRow row = predict_row(ws, ss, plat, hz);
                                if (w_sim) row.sim_ops_s = simulate_mean(ws, ss, plat, wo, wc.seed) * hz;
                                rows.push_back(row);
                            }
                        }
                    }
                }
            }
            emit(wc.out_file, out, [&](std::ostream& os) { write_scenarios(os, rows); });
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace lfperf
