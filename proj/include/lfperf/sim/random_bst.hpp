#pragma once

// Plain binary search tree grown by inserting a permutation in order.

#include <cstdint>
#include <vector>

#include "lfperf/workload.hpp"

namespace lfperf::sim {

struct RandomBst {
    Key min_key = 1;
    std::vector<int> left, right, parent;  // indexed by key - min_key, -1 for none
    std::vector<int> depth;                // root at depth 0
    std::vector<int> subtree;              // node count of the subtree
    int root = -1;

    std::size_t size() const { return depth.size(); }
    /// True when the search for `target` visits node `k`. Routes right on
    /// target >= node key, matching the external tree's routing rule.
    bool on_route(Key k, Key target) const;
};

/// Keys must be distinct; the range is [min, max] of the permutation and
/// must be dense.
RandomBst build_random_bst(const std::vector<Key>& permutation);

}  // namespace lfperf::sim
