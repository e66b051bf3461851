#include "lfperf/harness/topology.hpp"

#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

namespace lfperf::harness {

namespace fs = std::filesystem;

namespace {

bool read_line(const fs::path& p, std::string& out) {
    std::ifstream in(p);
    return static_cast<bool>(std::getline(in, out));
}

bool read_int(const fs::path& p, long long& out) {
    std::string s;
    if (!read_line(p, s)) return false;
    try {
        out = std::stoll(s);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

// "32K", "1024K", "16M"
std::int64_t parse_size(const std::string& s) {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos < s.size()) {
        switch (s[pos]) {
            case 'K': case 'k': v <<= 10; break;
            case 'M': case 'm': v <<= 20; break;
            case 'G': case 'g': v <<= 30; break;
            default: break;
        }
    }
    return v;
}

std::vector<int> affinity_cpus() {
    std::vector<int> out;
    cpu_set_t set;
    CPU_ZERO(&set);
    if (sched_getaffinity(0, sizeof(set), &set) == 0) {
        for (int c = 0; c < CPU_SETSIZE; ++c) {
            if (CPU_ISSET(c, &set)) out.push_back(c);
        }
    }
    if (out.empty()) {
        for (unsigned c = 0; c < std::max(1u, std::thread::hardware_concurrency()); ++c) out.push_back(static_cast<int>(c));
    }
    return out;
}

}  // namespace

int available_cpus() { return static_cast<int>(affinity_cpus().size()); }

void pin_current_thread(int cpu) {
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(cpu, &set);
    if (pthread_setaffinity_np(pthread_self(), sizeof(set), &set) != 0) {
        throw std::runtime_error("failed to pin thread to cpu " + std::to_string(cpu));
    }
}

Topology detect_topology(const fs::path& root) {
    Topology t;
    t.detected = true;
    for (int id : affinity_cpus()) {
        const fs::path topo = root / ("cpu" + std::to_string(id)) / "topology";
        long long pkg = 0, core = id;
        if (!read_int(topo / "physical_package_id", pkg) || !read_int(topo / "core_id", core)) {
            t.detected = false;
            pkg = 0;
            core = id;
        }
        t.cpus.push_back({id, static_cast<int>(pkg), static_cast<int>(core)});
    }

    std::map<int, std::set<int>> cores;
    for (const auto& c : t.cpus) cores[c.package].insert(c.core);
    t.sockets = static_cast<int>(cores.size());
    t.cores_per_socket = 1;
    for (const auto& [pkg, s] : cores) t.cores_per_socket = std::max(t.cores_per_socket, static_cast<int>(s.size()));

    if (!t.cpus.empty()) {
        const fs::path cache = root / ("cpu" + std::to_string(t.cpus.front().id)) / "cache";
        for (int i = 0;; ++i) {
            const fs::path idx = cache / ("index" + std::to_string(i));
            if (!fs::exists(idx)) break;
            CacheInfo ci;
            long long v = 0;
            std::string s;
            if (read_int(idx / "level", v)) ci.level = static_cast<int>(v);
            read_line(idx / "type", ci.type);
            if (read_line(idx / "size", s)) {
                try {
                    ci.size_bytes = parse_size(s);
                } catch (const std::exception&) {
                    ci.size_bytes = 0;
                }
            }
            if (read_int(idx / "coherency_line_size", v)) ci.line_size = static_cast<int>(v);
            if (ci.level > 0 && ci.size_bytes > 0) t.caches.push_back(ci);
        }
        std::sort(t.caches.begin(), t.caches.end(), [](const CacheInfo& a, const CacheInfo& b) { return a.level < b.level; });
    }
    if (t.caches.empty()) t.detected = false;
    return t;
}

std::vector<int> pinning_order(const Topology& t) {
    std::map<int, std::map<int, int>> first;  // package -> core -> lowest cpu id
    for (const auto& c : t.cpus) {
        auto& slot = first[c.package];
        auto it = slot.find(c.core);
        if (it == slot.end() || c.id < it->second) slot[c.core] = c.id;
    }
    std::vector<int> order;
    for (const auto& [pkg, cores] : first) {
        std::vector<int> ids;
        for (const auto& [core, id] : cores) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        order.insert(order.end(), ids.begin(), ids.end());
    }
    return order;
}

}  // namespace lfperf::harness
