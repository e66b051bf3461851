#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lfperf/cli.hpp"
#include "lfperf/config.hpp"
#include "lfperf/csv.hpp"
#include "lfperf/model.hpp"
#include "lfperf/sim/simulator.hpp"
#include "lfperf/sim/stats.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace lfperf;

namespace {

struct Setup {
    WorkloadSpec workload;
    StructureSpec structure;
    PlatformSpec platform;
};

Setup setup(const std::string& workload, const std::string& platform, const std::string& structure,
            std::optional<int> threads, const std::string& layout, int load_factor) {
    Setup s;
    s.workload = load_workload(workload);
    if (threads) s.workload.threads = *threads;
    s.platform = load_platform(platform);
    s.structure.kind = parse_structure_kind(structure);
    s.structure.layout = parse_layout(layout);
    s.structure.load_factor = load_factor;
    return s;
}

py::dict predict_py(const std::string& workload, const std::string& platform, const std::string& structure,
                    std::optional<int> threads, const std::string& layout, int load_factor, double freq_ghz) {
    const Setup s = setup(workload, platform, structure, threads, layout, load_factor);
    const Prediction p = predict(Workload(s.workload), s.structure, s.platform);
    const ScenarioRow row = describe_scenario(s.workload, s.structure);
    const auto& f = p.solution.shares;
    py::dict shares("app"_a = f.app, "compute"_a = f.compute, "cas"_a = f.cas, "stall"_a = f.stall,
                    "recovery"_a = f.recovery, "cache"_a = f.cache, "tlb"_a = f.tlb);
    return py::dict("scenario"_a = row.scenario, "throughput"_a = p.solution.T,
                    "ops_per_second"_a = p.solution.ops_per_second(freq_ghz * 1e9), "A"_a = p.solution.A,
                    "Bq"_a = p.solution.Bq, "events_per_op"_a = p.solution.events_per_op,
                    "nodes"_a = p.rates.entries.size(), "shares"_a = shares);
}

py::dict simulate_py(const std::string& workload, const std::string& platform, const std::string& structure,
                     std::optional<int> threads, const std::string& layout, int load_factor, std::uint64_t seed,
                     std::size_t ops, std::size_t warmup_ops, std::vector<Key> tracked) {
    const Setup s = setup(workload, platform, structure, threads, layout, load_factor);
    sim::SimConfig c;
    c.workload = s.workload;
    c.structure = s.structure;
    c.platform = s.platform;
    c.seed = seed;
    c.ops_per_thread = ops;
    c.warmup_ops_per_thread = warmup_ops;
    c.tracked_keys = std::move(tracked);
    sim::SimReport r;
    {
        py::gil_scoped_release nogil;
        r = sim::simulate_full(c);
    }
    return py::dict("throughput"_a = r.throughput, "measured_ops"_a = r.measured_ops,
                    "events_per_op"_a = r.mean_events_per_op, "dcache_hit_ratio"_a = r.dcache_hit_ratio,
                    "tlb_hit_ratio"_a = r.tlb_hit_ratio, "coherence_ratio"_a = r.coherence_ratio,
                    "interarrival"_a = r.interarrival);
}

py::dict ks_py(std::vector<double> samples) {
    const auto k = sim::ks_exponential(std::move(samples));
    return py::dict("n"_a = k.n, "mean"_a = k.mean, "statistic"_a = k.statistic, "p_value"_a = k.p_value);
}

std::vector<double> che_py(const std::vector<double>& rates, double capacity, std::optional<std::vector<double>> presence) {
    const std::vector<double> p = presence ? *presence : std::vector<double>(rates.size(), 1.0);
    if (p.size() != rates.size()) throw std::invalid_argument("presence and rates differ in length");
    const CharTime ct = char_time(p, rates, capacity);
    std::vector<double> out;
    out.reserve(rates.size());
    for (double r : rates) out.push_back(che_hit(r, ct));
    return out;
}

int cli_py(std::vector<std::string> args) {
    args.insert(args.begin(), "lfperf");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    py::gil_scoped_release nogil;
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Throughput model, oracle simulator and helpers for lock-free sets";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("predict", &predict_py, "workload"_a, "platform"_a, "structure"_a = "ll", "threads"_a = py::none(),
          "layout"_a = "padded", "load_factor"_a = 1, "freq_ghz"_a = 1.0,
          "Analytical prediction; throughput is in operations per cycle");
    m.def("simulate", &simulate_py, "workload"_a, "platform"_a, "structure"_a = "ll", "threads"_a = py::none(),
          "layout"_a = "padded", "load_factor"_a = 1, "seed"_a = 1, "ops"_a = 10000, "warmup_ops"_a = 10000,
          "tracked_keys"_a = std::vector<Key>{}, "Oracle simulation; throughput is in operations per cycle");
    m.def("ks_exponential", &ks_py, "samples"_a, "KS distance to the exponential with the sample mean");
    m.def("che_hit_ratios", &che_py, "rates"_a, "capacity"_a, "presence"_a = py::none(),
          "Per-item LRU hit ratio under Che's approximation");
    m.def("run_cli", &cli_py, "args"_a, "Runs the lfperf command line and returns its exit code");
}
