#include "lfperf/harness/bench.hpp"

#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "lfperf/harness/cycles.hpp"
#include "lfperf/harness/structures.hpp"
#include "lfperf/harness/topology.hpp"
#include "lfperf/rates.hpp"
#include "lfperf/sim/opgen.hpp"
#include "lfperf/sim/rng.hpp"

namespace lfperf::harness {

namespace {

struct alignas(64) Counter {
    std::atomic<std::uint64_t> ops{0};
};

}  // namespace

BenchReport run_bench(const BenchConfig& cfg) {
    const Workload w(cfg.workload);
    const ResolvedStructure rs = resolve(cfg.structure, w, cfg.platform);
    const int P = w.threads();
    if (!(cfg.measure_seconds > 0.0) || cfg.warmup_seconds < 0.0) throw std::invalid_argument("bad bench durations");
    std::vector<int> cpus = cfg.pinning;
    if (cfg.pin && cpus.empty()) {
        cpus = pinning_order(detect_topology());
        if (P > static_cast<int>(cpus.size())) {
            throw std::runtime_error("not enough cores to pin " + std::to_string(P) + " threads (" +
                                     std::to_string(cpus.size()) + " available)");
        }
    }
    if (cfg.pin && static_cast<int>(cpus.size()) < P) throw std::runtime_error("pinning map shorter than thread count");

    auto set = make_concurrent_set(rs, w.key_range(), P);
    std::vector<char> tracked(static_cast<std::size_t>(w.key_range()) + 1, 0);
    for (Key k : cfg.tracked_keys) {
        if (k < 1 || k > w.key_range()) throw std::invalid_argument("tracked key out of range");
        tracked[static_cast<std::size_t>(k)] = 1;
    }

    // Prefill: key k present with probability p_in(k); tracked keys always.
    {
        ThreadCtx c;
        sim::Rng rng(sim::derive_seed(cfg.seed, 0xF111u));
        const auto pres = presence_vector(w);
        std::vector<Key> keys;
        for (Key k = 1; k <= w.key_range(); ++k) {
            if (tracked[static_cast<std::size_t>(k)] || rng.bernoulli(pres[static_cast<std::size_t>(k)])) keys.push_back(k);
        }
        for (std::size_t i = keys.size(); i > 1; --i) std::swap(keys[i - 1], keys[rng.below(i)]);
        for (Key k : keys) set->insert(c, k);
    }

    std::vector<Counter> counters(static_cast<std::size_t>(P));
    std::vector<ThreadCtx> ctx(static_cast<std::size_t>(P));
    std::atomic<int> phase{0};  // 0 warmup, 1 measure, 2 stop
    std::atomic<int> ready{0};
    std::atomic<bool> go{false};
    std::vector<std::string> errors(static_cast<std::size_t>(P));

    auto worker = [&](int tid) {
        try {
            if (cfg.pin) pin_current_thread(cpus[static_cast<std::size_t>(tid)]);
            ThreadCtx& c = ctx[static_cast<std::size_t>(tid)];
            c.tid = tid;
            if (!cfg.tracked_keys.empty()) c.tracked = &tracked;
            sim::OpGenerator gen(w, sim::derive_seed(cfg.seed, 0x7000u + static_cast<std::uint64_t>(tid)));
            ready.fetch_add(1);
            while (!go.load(std::memory_order_acquire)) cpu_relax();
            auto& ops = counters[static_cast<std::size_t>(tid)].ops;
            std::uint64_t n = 0;
            int seen = 0;
            while (true) {
                if ((n & 63) == 0) {
                    const int ph = phase.load(std::memory_order_relaxed);
                    if (ph == 2) break;
                    if (ph != seen) {
                        seen = ph;
                        c.recording = ph == 1;
                    }
                }
                sim::Op op = gen.next();
                if (op.kind == OpKind::Delete && c.tracked && tracked[static_cast<std::size_t>(op.key)]) {
                    op.kind = OpKind::Search;
                }
                c.begin_op();
                switch (op.kind) {
                    case OpKind::Insert: set->insert(c, op.key); break;
                    case OpKind::Delete: set->remove(c, op.key); break;
                    case OpKind::Search: set->contains(c, op.key); break;
                }
                spin_cycles(cfg.app_delay_cycles);
                ops.store(++n, std::memory_order_relaxed);
            }
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(tid)] = e.what();
            ready.fetch_add(1);
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(P));
    for (int i = 0; i < P; ++i) threads.emplace_back(worker, i);
    while (ready.load() < P) std::this_thread::yield();
    go.store(true, std::memory_order_release);

    using clk = std::chrono::steady_clock;
    std::this_thread::sleep_for(std::chrono::duration<double>(cfg.warmup_seconds));
    std::vector<std::uint64_t> start(static_cast<std::size_t>(P));
    phase.store(1);
    const auto t0 = clk::now();
    for (int i = 0; i < P; ++i) start[static_cast<std::size_t>(i)] = counters[static_cast<std::size_t>(i)].ops.load();
    std::this_thread::sleep_for(std::chrono::duration<double>(cfg.measure_seconds));
    std::vector<std::uint64_t> stop(static_cast<std::size_t>(P));
    for (int i = 0; i < P; ++i) stop[static_cast<std::size_t>(i)] = counters[static_cast<std::size_t>(i)].ops.load();
    const auto t1 = clk::now();
    phase.store(2);
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error("bench worker failed: " + e);
    }

    BenchReport rep;
    rep.seconds = std::chrono::duration<double>(t1 - t0).count();
    std::uint64_t total = 0;
    for (int i = 0; i < P; ++i) {
        rep.thread_ops.push_back(stop[static_cast<std::size_t>(i)] - start[static_cast<std::size_t>(i)]);
        total += rep.thread_ops.back();
    }
    rep.ops_per_second = static_cast<double>(total) / rep.seconds;
    rep.cycles_per_second = cycles_per_second();
    for (Key k : cfg.tracked_keys) rep.interarrival[k];
    for (const auto& c : ctx) {
        std::map<Key, std::uint64_t> last;
        for (const auto& [k, ts] : c.stamps) {
            auto it = last.find(k);
            if (it != last.end()) rep.interarrival[k].push_back(static_cast<double>(ts - it->second));
            last[k] = ts;
        }
    }
    rep.reclamation = set->reclamation();
    rep.final_size = set->snapshot().size();
    rep.slot_size = set->slot_size();
    return rep;
}

}  // namespace lfperf::harness
