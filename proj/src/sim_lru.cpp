#include "lfperf/sim/lru.hpp"

#include <algorithm>
#include <stdexcept>

namespace lfperf::sim {

LruStack::LruStack(std::size_t ids) : last_(ids, kNone) {
    std::size_t w = 1024;
    while (w < 4 * ids) w <<= 1;
    owner_.assign(w, kNone);
    tree_.assign(w + 1, 0);
}

void LruStack::add(std::size_t pos, int delta) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

std::uint64_t LruStack::prefix(std::size_t pos) const {
    std::int64_t s = 0;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return static_cast<std::uint64_t>(s);
}

void LruStack::compact() {
    // Renumber live marks 0..live-1 in recency order.
    std::vector<std::uint32_t> order;
    order.reserve(live_);
    for (std::size_t t = 0; t < now_; ++t) {
        if (owner_[t] != kNone && last_[owner_[t]] == t) order.push_back(owner_[t]);
    }
    std::fill(owner_.begin(), owner_.end(), kNone);
    std::fill(tree_.begin(), tree_.end(), 0);
    now_ = 0;
    for (std::uint32_t id : order) {
        last_[id] = static_cast<std::uint32_t>(now_);
        owner_[now_] = id;
        add(now_, 1);
        ++now_;
    }
}

std::uint64_t LruStack::access(std::uint32_t id) {
    if (id >= last_.size()) throw std::out_of_range("LruStack: id out of range");
    if (now_ == owner_.size()) compact();
    std::uint64_t dist = kCold;
    const std::uint32_t prev = last_[id];
    if (prev != kNone) {
        // every live id holds exactly one mark, so marks in [0, now) = live_
        dist = live_ - prefix(static_cast<std::size_t>(prev) + 1);
        add(prev, -1);
        owner_[prev] = kNone;
    } else {
        ++live_;
    }
    last_[id] = static_cast<std::uint32_t>(now_);
    owner_[now_] = id;
    add(now_, 1);
    ++now_;
    return dist;
}

void LruStack::invalidate(std::uint32_t id) {
    const std::uint32_t prev = last_[id];
    if (prev == kNone) return;
    add(prev, -1);
    owner_[prev] = kNone;
    last_[id] = kNone;
    --live_;
}

std::vector<double> simulate_lru(const std::vector<std::uint32_t>& trace, std::size_t ids, std::size_t capacity) {
    if (capacity < 1) throw std::invalid_argument("LRU capacity must be >= 1");
    LruStack lru(ids);
    std::vector<std::uint64_t> refs(ids, 0), hits(ids, 0);
    for (std::uint32_t id : trace) {
        const std::uint64_t d = lru.access(id);
        ++refs[id];
        if (d != LruStack::kCold && d < capacity) ++hits[id];
    }
    std::vector<double> out(ids, 0.0);
    for (std::size_t i = 0; i < ids; ++i) {
        if (refs[i] > 0) out[i] = static_cast<double>(hits[i]) / static_cast<double>(refs[i]);
    }
    return out;
}

}  // namespace lfperf::sim
