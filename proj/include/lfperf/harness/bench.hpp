#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lfperf/harness/ebr.hpp"
#include "lfperf/workload.hpp"

namespace lfperf::harness {

struct BenchConfig {
    WorkloadSpec workload;
    StructureSpec structure;
    PlatformSpec platform;  // only cacheline/page/topology fields are used
    double warmup_seconds = 0.5;
    double measure_seconds = 1.0;
    std::vector<Key> tracked_keys;  // deletes of these keys become searches
    std::vector<int> pinning;       // cpu per thread; empty = one per core, fill-first
    bool pin = true;
    std::uint64_t app_delay_cycles = 0;  // busy work between operations
    std::uint64_t seed = 1;
};

struct BenchReport {
    double ops_per_second = 0.0;
    double seconds = 0.0;
    std::vector<std::uint64_t> thread_ops;  // measured window only
    double cycles_per_second = 0.0;
    std::map<Key, std::vector<double>> interarrival;  // counter ticks
    Ebr::Stats reclamation;
    std::size_t final_size = 0;
    std::size_t slot_size = 0;
};

/// Runs P worker threads over a prefilled structure; throughput counts
/// operations completed inside the measurement window.
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace lfperf::harness
