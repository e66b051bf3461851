#pragma once

// Exact LRU via stack distances. One instance answers hit/miss for every
// capacity at once: a reference hits a cache of C entries iff fewer than C
// distinct other ids were referenced since its previous reference.

#include <cstdint>
#include <limits>
#include <vector>

namespace lfperf::sim {

class LruStack {
public:
    static constexpr std::uint64_t kCold = std::numeric_limits<std::uint64_t>::max();

    explicit LruStack(std::size_t ids);

    /// References id; returns its stack distance (kCold if never seen or invalidated).
    std::uint64_t access(std::uint32_t id);
    /// Drops id from the stack, as on a coherence invalidation.
    void invalidate(std::uint32_t id);
    bool resident(std::uint32_t id) const { return last_[id] != kNone; }
    std::size_t live() const { return live_; }

private:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    void add(std::size_t pos, int delta);
    std::uint64_t prefix(std::size_t pos) const;  // marks in [0, pos)
    void compact();

    std::vector<std::uint32_t> last_;   // id -> timestamp of last reference
    std::vector<std::uint32_t> owner_;  // timestamp -> id (valid where marked)
    std::vector<int> tree_;             // Fenwick over timestamps
    std::size_t now_ = 0;
    std::size_t live_ = 0;
};

/// Per-id hit ratio of an LRU cache of capacity C over a trace.
/// Ids never referenced get ratio 0.
std::vector<double> simulate_lru(const std::vector<std::uint32_t>& trace, std::size_t ids, std::size_t capacity);

}  // namespace lfperf::sim
