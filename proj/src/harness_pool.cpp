#include "lfperf/harness/pool.hpp"

#include <cstdlib>
#include <new>
#include <stdexcept>

#if defined(__SANITIZE_ADDRESS__)
#define LFPERF_POOL_PASSTHROUGH 1
#elif defined(__has_feature)
#if __has_feature(address_sanitizer)
#define LFPERF_POOL_PASSTHROUGH 1
#endif
#endif

namespace lfperf::harness {

NodePool::NodePool(std::size_t slot_size, int threads) : slot_(slot_size), local_(static_cast<std::size_t>(threads)) {
    if (slot_ == 0 || slot_ % 8 != 0 || slot_ > kChunk) throw std::invalid_argument("NodePool: bad slot size");
    if (threads < 1) throw std::invalid_argument("NodePool: need at least one thread");
}

NodePool::~NodePool() {
    for (auto& l : local_) {
        for (void* c : l.chunks) std::free(c);
    }
}

void* NodePool::alloc(int tid) {
    Local& l = local_[static_cast<std::size_t>(tid)];
#ifdef LFPERF_POOL_PASSTHROUGH
    (void)l;
    const std::size_t align = slot_ >= 64 ? 64 : slot_;
    void* p = std::aligned_alloc(align, (slot_ + align - 1) / align * align);
    if (!p) throw std::bad_alloc();
    return p;
#else
    if (!l.free_list.empty()) {
        void* p = l.free_list.back();
        l.free_list.pop_back();
        return p;
    }
    if (l.left < slot_) {
        void* c = std::aligned_alloc(4096, kChunk);
        if (!c) throw std::bad_alloc();
        l.chunks.push_back(c);
        l.cursor = static_cast<char*>(c);
        l.left = kChunk;
    }
    void* p = l.cursor;
    l.cursor += slot_;
    l.left -= slot_;
    return p;
#endif
}

void NodePool::free(int tid, void* p) {
#ifdef LFPERF_POOL_PASSTHROUGH
    (void)tid;
    std::free(p);
#else
    local_[static_cast<std::size_t>(tid)].free_list.push_back(p);
#endif
}

}  // namespace lfperf::harness
