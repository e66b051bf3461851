#pragma once

// Microbenchmarks that fill a PlatformSpec. All latencies are in counter
// ticks (rdtsc on x86, nanoseconds elsewhere); `ticks_per_second` converts.

#include <string>
#include <vector>

#include "lfperf/harness/topology.hpp"
#include "lfperf/workload.hpp"

namespace lfperf::harness {

struct CalibrateOptions {
    double probe_ms = 25.0;  // wall time per single measurement
    int repeats = 3;         // median over repeats
    // Manual pinning when topology detection fails. -1 = auto.
    int cpu_home = -1;
    int cpu_same_socket = -1;
    int cpu_other_socket = -1;
    std::string sysfs_root = "/sys/devices/system/cpu";
};

struct CalibrationResult {
    PlatformSpec platform;
    Topology topology;
    double ticks_per_second = 0.0;
    std::vector<std::string> warnings;
};

CalibrationResult calibrate(const CalibrateOptions& opt = {});

/// Average ticks per dependent load over a random cyclic chain of `slots`
/// slots spaced `stride` bytes apart. `huge` asks for transparent huge pages.
double chase_ticks(std::size_t slots, std::size_t stride, bool huge, double probe_ms);

/// Half round trip of two threads alternately CASing one line.
double cas_ping_pong_ticks(int cpu_a, int cpu_b, double probe_ms);

/// Per-load ticks reading lines just modified by a thread on `writer_cpu`.
double remote_read_ticks(int reader_cpu, int writer_cpu, double probe_ms);

}  // namespace lfperf::harness
