#include "lfperf/harness/ebr.hpp"

#include <chrono>
#include <stdexcept>

#include "lfperf/harness/cycles.hpp"

namespace lfperf::harness {

double cycles_per_second() {
    // The counter rate is fixed for the life of the process; measure once.
    static const double rate = [] {
        using clk = std::chrono::steady_clock;
        const auto t0 = clk::now();
        const std::uint64_t c0 = read_cycles();
        while (clk::now() - t0 < std::chrono::milliseconds(50)) {
        }
        const std::uint64_t c1 = read_cycles();
        const double s = std::chrono::duration<double>(clk::now() - t0).count();
        return static_cast<double>(c1 - c0) / s;
    }();
    return rate;
}

Ebr::Ebr(int max_threads, std::size_t advance_every)
    : advance_every_(advance_every), slots_(new Slot[static_cast<std::size_t>(max_threads)]), n_(max_threads) {
    if (max_threads < 1) throw std::invalid_argument("Ebr: need at least one thread");
}

Ebr::~Ebr() { drain(); }

void Ebr::enter(int tid) {
    const std::uint64_t e = global_.load(std::memory_order_acquire);
    slots_[tid].state.store((e << 1) | 1u, std::memory_order_relaxed);
    // The pin must be visible before any shared pointer is loaded.
    std::atomic_thread_fence(std::memory_order_seq_cst);
}

void Ebr::exit(int tid) { slots_[tid].state.store(0, std::memory_order_release); }

void Ebr::try_advance() {
    const std::uint64_t e = global_.load(std::memory_order_acquire);
    for (int i = 0; i < n_; ++i) {
        const std::uint64_t s = slots_[i].state.load(std::memory_order_acquire);
        if ((s & 1u) && (s >> 1) != e) return;
    }
    std::uint64_t expected = e;
    if (global_.compare_exchange_strong(expected, e + 1, std::memory_order_acq_rel)) {
        advances_.fetch_add(1, std::memory_order_relaxed);
    }
}

void Ebr::free_bin(int tid, Slot& s, int b) {
    for (const Retired& r : s.bin[b]) r.del(r.ctx, tid, r.p);
    s.freed += s.bin[b].size();
    s.bin[b].clear();
}

void Ebr::retire(int tid, void* p, Deleter del, void* ctx) {
    Slot& s = slots_[tid];
    if (++s.since_advance >= advance_every_) {
        s.since_advance = 0;
        try_advance();
    }
    const std::uint64_t e = global_.load(std::memory_order_acquire);
    for (int b = 0; b < 3; ++b) {
        if (!s.bin[b].empty() && s.bin_epoch[b] + 2 <= e) free_bin(tid, s, b);
    }
    const int b = static_cast<int>(e % 3);
    // A non-empty bin with this index holds epoch e - 3 or older: freed above.
    s.bin_epoch[b] = e;
    s.bin[b].push_back({p, del, ctx});
    ++s.retired;
}

void Ebr::drain() {
    for (int i = 0; i < n_; ++i) {
        for (int b = 0; b < 3; ++b) free_bin(i, slots_[i], b);
    }
}

Ebr::Stats Ebr::stats() const {
    Stats st;
    for (int i = 0; i < n_; ++i) {
        st.retired += slots_[i].retired;
        st.freed += slots_[i].freed;
    }
    st.advances = advances_.load(std::memory_order_relaxed);
    return st;
}

}  // namespace lfperf::harness
