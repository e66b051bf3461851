#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lfperf::harness {

struct CacheInfo {
    int level = 0;
    std::string type;  // Data, Unified, Instruction
    std::int64_t size_bytes = 0;
    int line_size = 0;
};

struct Topology {
    struct Cpu {
        int id = 0;
        int package = 0;
        int core = 0;
    };
    std::vector<Cpu> cpus;          // online cpus this process may use
    std::vector<CacheInfo> caches;  // as seen by the first cpu
    int sockets = 1;
    int cores_per_socket = 1;       // physical cores on the fullest socket
    bool detected = false;          // false when sysfs was unreadable
};

/// Reads package/core ids and cache geometry below `root`
/// (normally /sys/devices/system/cpu). Missing files leave `detected` false
/// and fall back to one socket of affinity-visible cpus.
Topology detect_topology(const std::filesystem::path& root = "/sys/devices/system/cpu");

/// One logical cpu per physical core, socket 0 first, then socket 1...
/// Fill-first order matching how the model places threads.
std::vector<int> pinning_order(const Topology& t);

int available_cpus();
void pin_current_thread(int cpu);

}  // namespace lfperf::harness
