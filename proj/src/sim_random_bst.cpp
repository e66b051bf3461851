#include "lfperf/sim/random_bst.hpp"

#include <algorithm>
#include <stdexcept>

namespace lfperf::sim {

RandomBst build_random_bst(const std::vector<Key>& perm) {
    RandomBst t;
    if (perm.empty()) return t;
    const auto [lo, hi] = std::minmax_element(perm.begin(), perm.end());
    t.min_key = *lo;
    const auto n = static_cast<std::size_t>(*hi - *lo + 1);
    if (n != perm.size()) throw std::invalid_argument("permutation keys must be distinct and dense");
    t.left.assign(n, -1);
    t.right.assign(n, -1);
    t.parent.assign(n, -1);
    t.depth.assign(n, -1);
    t.subtree.assign(n, 1);
    for (Key k : perm) {
        const int i = static_cast<int>(k - t.min_key);
        if (t.depth[i] != -1) throw std::invalid_argument("duplicate key in permutation");
        if (t.root < 0) {
            t.root = i;
            t.depth[i] = 0;
            continue;
        }
        int cur = t.root;
        while (true) {
            ++t.subtree[cur];
            int& next = i < cur ? t.left[cur] : t.right[cur];
            if (next < 0) {
                next = i;
                t.parent[i] = cur;
                t.depth[i] = t.depth[cur] + 1;
                break;
            }
            cur = next;
        }
    }
    return t;
}

bool RandomBst::on_route(Key k, Key target) const {
    const int want = static_cast<int>(k - min_key);
    const int tgt = static_cast<int>(target - min_key);
    int cur = root;
    while (cur >= 0) {
        if (cur == want) return true;
        cur = tgt >= cur ? right[cur] : left[cur];
    }
    return false;
}

}  // namespace lfperf::sim
