#pragma once

// Per-thread slab allocator that controls how many nodes share a cacheline.
// Slots are carved from 64 KiB chunks aligned to the page; a 64-byte slot
// gives one node per line (padded), a 32-byte slot two (packed). Freed slots
// return to the freeing thread's list. Under AddressSanitizer every slot is
// an individual aligned allocation so use-after-free is still caught.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lfperf::harness {

class NodePool {
public:
    NodePool(std::size_t slot_size, int threads);
    ~NodePool();
    NodePool(const NodePool&) = delete;
    NodePool& operator=(const NodePool&) = delete;

    void* alloc(int tid);
    void free(int tid, void* p);
    std::size_t slot_size() const { return slot_; }

    /// Trampoline usable as an Ebr deleter with the pool as context.
    static void reclaim(void* pool, int tid, void* p) { static_cast<NodePool*>(pool)->free(tid, p); }

private:
    static constexpr std::size_t kChunk = 64 * 1024;
    struct alignas(64) Local {
        std::vector<void*> free_list;
        std::vector<void*> chunks;
        char* cursor = nullptr;
        std::size_t left = 0;
    };
    std::size_t slot_;
    std::vector<Local> local_;
};

}  // namespace lfperf::harness
