#pragma once

// Lock-free sets used by the benchmark harness.
//   LinkedList / HashTable : Harris list, Michael's single-unlink variant
//   SkipList               : valued node (key, value, level-0 link) plus a
//                            separate routing node holding links 1..top
//   ExternalBst            : Natarajan-Mittal, flagged/tagged edges
// All memory goes through NodePool and is reclaimed with Ebr.

#include <cstdint>
#include <memory>
#include <vector>

#include "lfperf/harness/cycles.hpp"
#include "lfperf/harness/ebr.hpp"
#include "lfperf/workload.hpp"

namespace lfperf::harness {

/// Per-thread handle. Tracking records one timestamp per operation for
/// every tracked key whose node the operation traverses.
struct ThreadCtx {
    int tid = 0;
    const std::vector<char>* tracked = nullptr;  // indexed by key
    bool recording = false;
    std::uint32_t op = 0;
    std::vector<std::uint32_t> last_op;  // per key
    std::vector<std::pair<Key, std::uint64_t>> stamps;

    void begin_op() { ++op; }
    void visit(Key k) {
        if (tracked == nullptr || k < 0 || static_cast<std::size_t>(k) >= tracked->size()) return;
        if (!(*tracked)[static_cast<std::size_t>(k)]) return;
        if (last_op.size() < tracked->size()) last_op.assign(tracked->size(), 0);
        auto& l = last_op[static_cast<std::size_t>(k)];
        if (l == op) return;
        l = op;
        if (recording) stamps.emplace_back(k, read_cycles());
    }
};

class ConcurrentSet {
public:
    virtual ~ConcurrentSet() = default;
    virtual bool insert(ThreadCtx& c, Key k) = 0;
    virtual bool remove(ThreadCtx& c, Key k) = 0;
    virtual bool contains(ThreadCtx& c, Key k) = 0;
    /// Present keys in order. Quiescent use only.
    virtual std::vector<Key> snapshot() const = 0;
    /// Addresses of every reachable node. Quiescent use only.
    virtual std::vector<const void*> node_addresses() const = 0;
    virtual Ebr::Stats reclamation() const = 0;
    virtual std::size_t slot_size() const = 0;
};

/// Builds the structure for keys [1, key_range] usable by `threads` threads.
std::unique_ptr<ConcurrentSet> make_concurrent_set(const ResolvedStructure& s, Key key_range, int threads);

}  // namespace lfperf::harness
