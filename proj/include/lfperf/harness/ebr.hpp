#pragma once

// Epoch-based reclamation. A thread inside a critical section pins the
// global epoch it observed; memory retired in epoch e is freed once the
// global epoch reaches e + 2, at which point no pinned reader can hold it.

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

namespace lfperf::harness {

class Ebr {
public:
    using Deleter = void (*)(void* ctx, int tid, void* p);

    explicit Ebr(int max_threads, std::size_t advance_every = 128);
    ~Ebr();
    Ebr(const Ebr&) = delete;
    Ebr& operator=(const Ebr&) = delete;

    void enter(int tid);
    void exit(int tid);
    void retire(int tid, void* p, Deleter del, void* ctx);
    /// Frees everything still pending. Only legal when no thread is inside.
    void drain();

    struct Stats {
        std::uint64_t retired = 0;
        std::uint64_t freed = 0;
        std::uint64_t advances = 0;
    };
    Stats stats() const;

    class Guard {
    public:
        Guard(Ebr& e, int tid) : e_(e), tid_(tid) { e_.enter(tid_); }
        ~Guard() { e_.exit(tid_); }
        Guard(const Guard&) = delete;
        Guard& operator=(const Guard&) = delete;

    private:
        Ebr& e_;
        int tid_;
    };

private:
    struct Retired {
        void* p;
        Deleter del;
        void* ctx;
    };
    struct alignas(64) Slot {
        std::atomic<std::uint64_t> state{0};  // (epoch << 1) | active
        std::vector<Retired> bin[3];
        std::uint64_t bin_epoch[3] = {0, 0, 0};
        std::size_t since_advance = 0;
        std::uint64_t retired = 0;
        std::uint64_t freed = 0;
    };

    void try_advance();
    void free_bin(int tid, Slot& s, int b);

    alignas(64) std::atomic<std::uint64_t> global_{2};
    std::atomic<std::uint64_t> advances_{0};
    std::size_t advance_every_;
    std::unique_ptr<Slot[]> slots_;
    int n_;
};

}  // namespace lfperf::harness
