#include "lfperf/harness/calibrate.hpp"

#include <sched.h>
#include <sys/mman.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "lfperf/harness/cycles.hpp"
#include "lfperf/sim/opgen.hpp"

namespace lfperf::harness {

namespace {

constexpr std::size_t kLine = 64;
constexpr std::size_t kHuge = 2u << 20;

// Anonymous mapping, THP hinted on or off.
class Region {
public:
    Region(std::size_t bytes, bool huge) : bytes_((bytes + kHuge - 1) / kHuge * kHuge + kHuge) {
        void* p = mmap(nullptr, bytes_, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
        if (p == MAP_FAILED) throw std::bad_alloc();
        raw_ = static_cast<char*>(p);
        base_ = reinterpret_cast<char*>((reinterpret_cast<std::uintptr_t>(raw_) + kHuge - 1) / kHuge * kHuge);
#ifdef MADV_HUGEPAGE
        madvise(base_, bytes_ - static_cast<std::size_t>(base_ - raw_), huge ? MADV_HUGEPAGE : MADV_NOHUGEPAGE);
#else
        (void)huge;
#endif
    }
    ~Region() { munmap(raw_, bytes_); }
    Region(const Region&) = delete;
    Region& operator=(const Region&) = delete;
    char* base() const { return base_; }

private:
    std::size_t bytes_;
    char* raw_ = nullptr;
    char* base_ = nullptr;
};

double ticks_per_ms() { return cycles_per_second() / 1000.0; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
double repeat_median(int repeats, F&& f) {
    std::vector<double> v;
    for (int i = 0; i < std::max(1, repeats); ++i) v.push_back(f());
    return median(v);
}

struct AffinityGuard {
    cpu_set_t saved;
    AffinityGuard() { sched_getaffinity(0, sizeof(saved), &saved); }
    ~AffinityGuard() { sched_setaffinity(0, sizeof(saved), &saved); }
};

void* volatile g_sink;

double local_cas_ticks(double probe_ms) {
    alignas(64) std::atomic<std::uint64_t> x{0};
    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    std::uint64_t n = 0;
    const std::uint64_t t0 = read_cycles();
    std::uint64_t t1 = t0;
    do {
        for (int i = 0; i < 256; ++i) {
            std::uint64_t e = n;
            x.compare_exchange_strong(e, n + 1);
            ++n;
        }
        t1 = read_cycles();
    } while (t1 - t0 < budget);
    return static_cast<double>(t1 - t0) / static_cast<double>(n);
}

// Per-step cost of a sorted-list style comparison on an L1-resident chain,
// minus the bare chase.
double compare_ticks(double probe_ms) {
    struct N {
        N* next;
        std::int64_t key;
    };
    std::vector<N> nodes(32);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = {&nodes[(i + 1) % nodes.size()], static_cast<std::int64_t>(i)};
    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    auto run = [&](bool cmp) {
        N* p = &nodes[0];
        std::int64_t limit = 1 << 30, hits = 0;
        std::uint64_t steps = 0;
        const std::uint64_t t0 = read_cycles();
        std::uint64_t t1 = t0;
        do {
            for (int i = 0; i < 1024; ++i) {
                if (cmp) {
                    if (p->key >= limit) ++hits;
                }
                p = p->next;
            }
            steps += 1024;
            t1 = read_cycles();
        } while (t1 - t0 < budget);
        g_sink = p;
        if (hits) g_sink = nullptr;
        return static_cast<double>(t1 - t0) / static_cast<double>(steps);
    };
    return std::max(0.0, run(true) - run(false));
}

// Per-op cost of drawing the next operation, i.e. the harness loop body
// outside the structure.
double op_loop_ticks(double probe_ms) {
    WorkloadSpec ws;
    ws.key_range = 1024;
    ws.op_mix = BalancedMix{0.2};
    const Workload w(ws);
    sim::OpGenerator gen(w, 1);
    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    std::uint64_t n = 0, acc = 0;
    const std::uint64_t t0 = read_cycles();
    std::uint64_t t1 = t0;
    do {
        for (int i = 0; i < 1024; ++i) {
            const auto op = gen.next();
            acc += static_cast<std::uint64_t>(op.key) + static_cast<std::uint64_t>(op.kind);
        }
        n += 1024;
        t1 = read_cycles();
    } while (t1 - t0 < budget);
    g_sink = reinterpret_cast<void*>(acc);
    return static_cast<double>(t1 - t0) / static_cast<double>(n);
}

double load_average() {
    std::ifstream in("/proc/loadavg");
    double l = 0.0;
    if (!(in >> l)) return 0.0;
    return l;
}

bool thp_disabled() {
    std::ifstream in("/sys/kernel/mm/transparent_hugepage/enabled");
    std::string s;
    std::getline(in, s);
    return s.find("[never]") != std::string::npos;
}

}  // namespace

double chase_ticks(std::size_t slots, std::size_t stride, bool huge, double probe_ms) {
    if (slots < 2 || stride < sizeof(void*)) throw std::invalid_argument("chase_ticks: need >= 2 slots");
    Region r(slots * stride, huge);
    // With strides of a page or more every slot would map to the same cache
    // set; stagger the line used inside each stride.
    const std::size_t lines = stride >= 2 * kLine ? stride / kLine : 1;
    auto addr = [&](std::size_t i) {
        return reinterpret_cast<void**>(r.base() + i * stride + (lines > 1 ? (i * 7 % lines) * kLine : 0));
    };
    std::vector<std::size_t> order(slots);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(0x5eed);
    std::shuffle(order.begin() + 1, order.end(), rng);
    for (std::size_t i = 0; i < slots; ++i) *addr(order[i]) = addr(order[(i + 1) % slots]);

    void** p = addr(order[0]);
    for (std::size_t i = 0; i < 2 * slots; ++i) p = static_cast<void**>(*p);

    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    std::uint64_t loads = 0;
    const std::uint64_t t0 = read_cycles();
    std::uint64_t t1 = t0;
    do {
        for (int i = 0; i < 64; ++i) {
#define LFPERF_STEP p = static_cast<void**>(*p);
            LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP
            LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP LFPERF_STEP
#undef LFPERF_STEP
        }
        loads += 64 * 16;
        t1 = read_cycles();
    } while (t1 - t0 < budget);
    g_sink = p;
    return static_cast<double>(t1 - t0) / static_cast<double>(loads);
}

double cas_ping_pong_ticks(int cpu_a, int cpu_b, double probe_ms) {
    alignas(64) std::atomic<std::uint64_t> line{0};
    alignas(64) std::atomic<bool> stop{false};
    alignas(64) std::atomic<bool> ready{false};
    std::thread partner([&] {
        pin_current_thread(cpu_b);
        ready.store(true);
        std::uint64_t v = 1;
        while (true) {
            while (line.load(std::memory_order_acquire) != v) {
                if (stop.load(std::memory_order_relaxed)) return;
            }
            std::uint64_t e = v;
            line.compare_exchange_strong(e, v + 1);
            v += 2;
        }
    });
    AffinityGuard guard;
    pin_current_thread(cpu_a);
    while (!ready.load()) std::this_thread::yield();
    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    std::uint64_t v = 0, rounds = 0;
    const std::uint64_t t0 = read_cycles();
    std::uint64_t t1 = t0;
    while (true) {
        while (line.load(std::memory_order_acquire) != v) {
        }
        std::uint64_t e = v;
        line.compare_exchange_strong(e, v + 1);
        v += 2;
        if ((++rounds & 255) == 0) {
            t1 = read_cycles();
            if (t1 - t0 >= budget) break;
        }
    }
    stop.store(true);
    partner.join();
    return static_cast<double>(t1 - t0) / static_cast<double>(2 * rounds);
}

double remote_read_ticks(int reader_cpu, int writer_cpu, double probe_ms) {
    constexpr std::size_t kLines = 64;
    struct alignas(64) L {
        L* next;
        std::uint64_t payload;
    };
    std::vector<L> lines(kLines);
    std::vector<std::size_t> order(kLines);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin() + 1, order.end(), std::mt19937_64(7));
    for (std::size_t i = 0; i < kLines; ++i) lines[order[i]].next = &lines[order[(i + 1) % kLines]];

    alignas(64) std::atomic<int> turn{0};  // 1: writer's move, 2: reader's move, 3: stop
    std::thread writer([&] {
        pin_current_thread(writer_cpu);
        while (true) {
            int t;
            while ((t = turn.load(std::memory_order_acquire)) != 1) {
                if (t == 3) return;
            }
            for (auto& l : lines) l.payload += 1;
            turn.store(2, std::memory_order_release);
        }
    });
    AffinityGuard guard;
    pin_current_thread(reader_cpu);
    const std::uint64_t budget = static_cast<std::uint64_t>(probe_ms * ticks_per_ms());
    std::uint64_t spent = 0, loads = 0;
    const std::uint64_t start = read_cycles();
    L* p = &lines[order[0]];
    while (read_cycles() - start < budget || loads == 0) {
        turn.store(1, std::memory_order_release);
        while (turn.load(std::memory_order_acquire) != 2) {
        }
        const std::uint64_t t0 = read_cycles();
        for (std::size_t i = 0; i < kLines; ++i) p = p->next;
        spent += read_cycles() - t0;
        loads += kLines;
    }
    turn.store(3);
    writer.join();
    g_sink = p;
    return static_cast<double>(spent) / static_cast<double>(loads);
}

CalibrationResult calibrate(const CalibrateOptions& opt) {
    CalibrationResult res;
    auto warn = [&](std::string s) { res.warnings.push_back(std::move(s)); };
    res.ticks_per_second = cycles_per_second();
    const double ms = opt.probe_ms;
    const int rep = opt.repeats;

    if (load_average() > 0.5) warn("machine does not look quiescent (1-minute load average > 0.5)");
    if (thp_disabled()) warn("transparent huge pages disabled; cache and memory latencies include TLB misses");

    Topology& topo = res.topology;
    topo = detect_topology(opt.sysfs_root);
    const std::vector<int> order = pinning_order(topo);
    if (!topo.detected) warn("topology detection incomplete; pass --cpu-same/--cpu-other for the CAS probes");

    const int home = opt.cpu_home >= 0 ? opt.cpu_home : (order.empty() ? 0 : order.front());
    int same = opt.cpu_same_socket, other = opt.cpu_other_socket;
    int home_pkg = 0;
    for (const auto& c : topo.cpus) {
        if (c.id == home) home_pkg = c.package;
    }
    for (int id : order) {
        if (id == home) continue;
        int pkg = 0;
        for (const auto& c : topo.cpus) {
            if (c.id == id) pkg = c.package;
        }
        if (pkg == home_pkg && same < 0) same = id;
        if (pkg != home_pkg && other < 0) other = id;
    }

    PlatformSpec& p = res.platform;
    p.sockets = std::max(1, topo.sockets);
    p.cores_per_socket = std::max(1, topo.cores_per_socket);

    // Cache geometry: data and unified levels only.
    std::vector<double> cap_lines;
    for (const auto& c : topo.caches) {
        if (c.type == "Instruction") continue;
        if (c.line_size > 0) p.cacheline_size = c.line_size;
        const double lines = static_cast<double>(c.size_bytes) / static_cast<double>(c.line_size > 0 ? c.line_size : 64);
        if (cap_lines.empty() || lines > cap_lines.back()) cap_lines.push_back(lines);
    }
    if (cap_lines.empty()) {
        warn("no cache geometry in sysfs; assuming 32 KiB / 1 MiB / 32 MiB");
        cap_lines = {512, 16384, 524288};
    }
    p.page_size = 4096;

    AffinityGuard guard;
    pin_current_thread(home);

    // Level l: chase a footprint between the previous capacity and this one,
    // then remove the share served by smaller levels.
    std::vector<double> lat;
    for (std::size_t l = 0; l < cap_lines.size(); ++l) {
        const double prev = l ? cap_lines[l - 1] : 0.0;
        const double c = cap_lines[l];
        const double n = l == 0 ? c / 2 : (c < 4 * prev ? (prev + c) / 2 : c / 2);
        const double m = repeat_median(rep, [&] { return chase_ticks(static_cast<std::size_t>(n), kLine, true, ms); });
        double rest = m, share = 1.0;
        for (std::size_t j = 0; j < l; ++j) {
            const double f = (cap_lines[j] - (j ? cap_lines[j - 1] : 0.0)) / n;
            rest -= f * lat[j];
            share -= f;
        }
        double t = share > 0.05 ? rest / share : m;
        if (l > 0) t = std::max(t, lat[l - 1]);
        lat.push_back(t);
        p.data_cache_levels.push_back({c, t});
    }
    {
        const double n = std::min(4 * cap_lines.back(), double(1u << 22));
        const double m = repeat_median(rep, [&] { return chase_ticks(static_cast<std::size_t>(n), kLine, true, ms); });
        double rest = m, share = 1.0;
        for (std::size_t j = 0; j < cap_lines.size(); ++j) {
            const double f = (cap_lines[j] - (j ? cap_lines[j - 1] : 0.0)) / n;
            rest -= f * lat[j];
            share -= f;
        }
        p.memory_latency = std::max(share > 0.05 ? rest / share : m, lat.back());
    }

    // TLB: one line per 4 KiB page against the same number of lines packed
    // into a huge page; the difference is translation cost.
    std::vector<double> pages, delta;
    for (double n = 8; n <= 32768; n *= 2) {
        const auto sz = static_cast<std::size_t>(n);
        const double small = repeat_median(rep, [&] { return chase_ticks(sz, 4096, false, ms); });
        const double packed = repeat_median(rep, [&] { return chase_ticks(sz, kLine, true, ms); });
        pages.push_back(n);
        delta.push_back(std::max(0.0, small - packed));
    }
    const double plateau = delta.back();
    const double flat = 1.0 + 0.05 * plateau;
    std::size_t k1 = 0;
    while (k1 + 1 < pages.size() && delta[k1 + 1] < flat) ++k1;
    const double l1_pages = pages[k1];
    double t_tlb2 = 0.0, l2_pages = 0.0;
    if (k1 + 2 < pages.size()) {
        // at 4x the first level, 3/4 of translations come from the second
        const std::size_t k = std::min(k1 + 2, pages.size() - 1);
        t_tlb2 = delta[k] / (1.0 - l1_pages / pages[k]);
        std::size_t k2 = k;
        while (k2 + 1 < pages.size() && delta[k2 + 1] < 1.5 * t_tlb2 + 1.0) ++k2;
        l2_pages = pages[k2];
    }
    if (plateau < 1.0 || l2_pages <= l1_pages || l2_pages >= pages.back()) {
        warn("TLB knees not found; using 64 / 1536 entries");
        p.tlb_levels = {{64, 0.0}, {1536, std::max(t_tlb2, 7.0)}};
        p.page_walk_latency = std::max(plateau, 30.0);
    } else {
        p.tlb_levels = {{l1_pages, 0.0}, {l2_pages, t_tlb2}};
        const double n = pages.back();
        const double f2 = (l2_pages - l1_pages) / n, fm = 1.0 - l2_pages / n;
        p.page_walk_latency = std::max(t_tlb2, (plateau - f2 * t_tlb2) / fm);
    }

    p.t_cmp = repeat_median(rep, [&] { return compare_ticks(ms); });
    p.t_app = repeat_median(rep, [&] { return op_loop_ticks(ms); });

    // Coherence probes need a second core.
    if (same >= 0) {
        p.t_cas_by_sockets[1] = repeat_median(rep, [&] { return cas_ping_pong_ticks(home, same, ms); });
        p.t_rec_low = repeat_median(rep, [&] { return remote_read_ticks(home, same, ms); });
    } else {
        warn("single core available; t_cas.1s = local CAS + last-level latency, t_rec.low = last-level latency");
        p.t_cas_by_sockets[1] = repeat_median(rep, [&] { return local_cas_ticks(ms); }) + lat.back();
        p.t_rec_low = lat.back();
    }
    if (other >= 0) {
        p.t_cas_by_sockets[2] = repeat_median(rep, [&] { return cas_ping_pong_ticks(home, other, ms); });
        p.t_rec_high = std::max(p.t_rec_low, repeat_median(rep, [&] { return remote_read_ticks(home, other, ms); }));
    } else {
        if (p.sockets > 1) warn("no cpu on a second socket is usable; cross-socket entries copied from same-socket");
        p.t_rec_high = p.t_rec_low;
    }
    p.validate();
    return res;
}

}  // namespace lfperf::harness
