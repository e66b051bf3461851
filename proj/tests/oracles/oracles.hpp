#pragma once

// Independent reference implementations used to check the model. Nothing in
// here calls into the library's probability code.

#include <cstdint>
#include <list>
#include <random>
#include <vector>

namespace oracle {

// ---- sorted list, exhaustive over presence subsets ---------------------------------

/// Conditional event probabilities for a sorted list with sentinels 0 and R+1.
/// p has size R+2 with p[0] = p[R+1] = 1. Results are indexed
/// [target][node]: P(event on node | node present) for an op on target.
struct ListProbs {
    std::vector<std::vector<double>> read, cas_ins, cas_del;
};

inline ListProbs enumerate_list(const std::vector<double>& p) {
    const int R = static_cast<int>(p.size()) - 2;
    const int n = R + 2;
    ListProbs out;
    auto zero = [&] { return std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)); };
    out.read = zero();
    out.cas_ins = zero();
    out.cas_del = zero();
    std::vector<double> marg(n, 0.0);
    for (std::uint32_t mask = 0; mask < (1u << R); ++mask) {
        std::vector<bool> in(n, false);
        in[0] = in[R + 1] = true;
        double w = 1.0;
        for (int k = 1; k <= R; ++k) {
            in[k] = (mask >> (k - 1)) & 1u;
            w *= in[k] ? p[k] : 1.0 - p[k];
        }
        if (w == 0.0) continue;
        for (int k = 0; k < n; ++k) {
            if (in[k]) marg[k] += w;
        }
        for (int t = 1; t <= R; ++t) {
            // walk from the head: every node before the stop point, and the stop node
            int pred = 0;
            for (int k = 1; k < n; ++k) {
                if (!in[k]) continue;
                if (k < t) {
                    pred = k;
                    out.read[t][k] += w;
                    continue;
                }
                out.read[t][k] += w;
                break;
            }
            out.read[t][0] += w;
            if (!in[t]) {
                out.cas_ins[t][pred] += w;
            } else {
                out.cas_del[t][t] += w;
                out.cas_del[t][pred] += w;
            }
        }
    }
    for (int t = 0; t < n; ++t) {
        for (int k = 0; k < n; ++k) {
            if (marg[k] > 0.0) {
                out.read[t][k] /= marg[k];
                out.cas_ins[t][k] /= marg[k];
                out.cas_del[t][k] /= marg[k];
            }
        }
    }
    return out;
}

// ---- skip list, exhaustive over (absent | height) per key ----------------------------

/// Event probabilities for a skip list with keys 1..R, sentinels at height
/// hmax, heights geometric with parameter q and tail mass at hmax.
/// Indexed [target][key][height]; conditional on the key having that height.
struct SkipProbs {
    // read of the valued node; routing reads coincide for height >= 1
    std::vector<std::vector<std::vector<double>>> read;
    std::vector<std::vector<std::vector<double>>> data_ins, data_del, rout_ins, rout_del;
};

inline std::vector<double> geometric_heights(int hmax, double q) {
    std::vector<double> pmf(static_cast<std::size_t>(hmax) + 1);
    double tail = 1.0;
    for (int h = 0; h < hmax; ++h) {
        pmf[h] = tail * (1 - q);
        tail *= q;
    }
    pmf[hmax] = tail;
    return pmf;
}

inline SkipProbs enumerate_skiplist(const std::vector<double>& p_in, int hmax, double q = 0.5) {
    const int R = static_cast<int>(p_in.size()) - 2;
    const int n = R + 2;
    const auto pmf = geometric_heights(hmax, q);
    auto cube = [&] {
        return std::vector<std::vector<std::vector<double>>>(
            n, std::vector<std::vector<double>>(n, std::vector<double>(hmax + 1, 0.0)));
    };
    SkipProbs out{cube(), cube(), cube(), cube(), cube()};
    std::vector<std::vector<double>> marg(n, std::vector<double>(hmax + 1, 0.0));

    const int states = hmax + 2;  // 0 = absent, 1 + h
    std::vector<int> st(n, 0);
    std::uint64_t total = 1;
    for (int i = 0; i < R; ++i) total *= states;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<int> height(n, -1);
        height[0] = height[R + 1] = hmax;
        double w = 1.0;
        std::uint64_t c = code;
        for (int k = 1; k <= R; ++k) {
            const int s = static_cast<int>(c % states);
            c /= states;
            height[k] = s - 1;
            w *= s == 0 ? 1.0 - p_in[k] : p_in[k] * pmf[s - 1];
        }
        if (w == 0.0) continue;
        for (int k = 0; k < n; ++k) {
            if (height[k] >= 0) marg[k][height[k]] += w;
        }
        for (int t = 1; t <= R; ++t) {
            // top-down search, stops as soon as the target is seen
            std::vector<bool> seen(n, false);
            seen[0] = true;
            int cur = 0;
            bool found = false;
            for (int L = hmax; L >= 0 && !found; --L) {
                while (true) {
                    int nx = cur + 1;
                    while (nx <= R && height[nx] < L) ++nx;
                    seen[nx] = true;
                    if (nx < t) {
                        cur = nx;
                        continue;
                    }
                    found = nx == t;
                    break;
                }
            }
            for (int k = 0; k < n; ++k) {
                if (seen[k]) out.read[t][k][height[k]] += w;
            }
            // predecessor of t at level L
            auto pred_at = [&](int L) {
                int k = t - 1;
                while (k > 0 && height[k] < L) --k;
                return k;
            };
            auto cas_levels = [&](int H, double weight, auto& data, auto& rout) {
                std::vector<bool> rhit(n, false);
                for (int L = 0; L <= H; ++L) {
                    const int pk = pred_at(L);
                    if (L == 0) {
                        data[t][pk][height[pk]] += weight;
                    } else {
                        rhit[pk] = true;
                    }
                }
                for (int k = 0; k < n; ++k) {
                    if (rhit[k]) rout[t][k][height[k]] += weight;
                }
            };
            if (height[t] < 0) {
                for (int H = 0; H <= hmax; ++H) cas_levels(H, w * pmf[H], out.data_ins, out.rout_ins);
            } else {
                const int H = height[t];
                out.data_del[t][t][H] += w;
                if (H >= 1) out.rout_del[t][t][H] += w;
                cas_levels(H, w, out.data_del, out.rout_del);
            }
        }
    }
    for (auto* cube_p : {&out.read, &out.data_ins, &out.data_del, &out.rout_ins, &out.rout_del}) {
        for (int t = 0; t < n; ++t) {
            for (int k = 0; k < n; ++k) {
                for (int h = 0; h <= hmax; ++h) {
                    if (marg[k][h] > 0.0) (*cube_p)[t][k][h] /= marg[k][h];
                }
            }
        }
    }
    return out;
}

// ---- exact LRU ------------------------------------------------------------------------

/// Textbook LRU: recency list plus position index.
class Lru {
public:
    Lru(std::size_t ids, std::size_t capacity) : capacity_(capacity), where_(ids), in_(ids, false) {}

    bool access(std::uint32_t id) {
        if (in_[id]) {
            order_.splice(order_.begin(), order_, where_[id]);
            return true;
        }
        if (order_.size() == capacity_) {
            in_[order_.back()] = false;
            order_.pop_back();
        }
        order_.push_front(id);
        where_[id] = order_.begin();
        in_[id] = true;
        return false;
    }

private:
    std::size_t capacity_;
    std::list<std::uint32_t> order_;
    std::vector<std::list<std::uint32_t>::iterator> where_;
    std::vector<bool> in_;
};

// ---- random binary search trees ---------------------------------------------------------

/// Plain BST over keys 1..N grown from an insertion order.
struct Bst {
    std::vector<int> left, right;  // by key, 0 = none
    int root = 0;

    explicit Bst(const std::vector<int>& order) {
        const int n = static_cast<int>(order.size());
        left.assign(n + 1, 0);
        right.assign(n + 1, 0);
        for (int k : order) {
            if (!root) {
                root = k;
                continue;
            }
            int c = root;
            while (true) {
                int& next = k < c ? left[c] : right[c];
                if (!next) {
                    next = k;
                    break;
                }
                c = next;
            }
        }
    }

    /// Nodes on the search path for target, routing right when target >= key.
    std::vector<int> path(int target) const {
        std::vector<int> out;
        for (int c = root; c; c = target >= c ? right[c] : left[c]) out.push_back(c);
        return out;
    }

    std::vector<int> subtree_sizes() const {
        std::vector<int> size(left.size(), 0);
        fill(root, size);
        return size;
    }

private:
    int fill(int c, std::vector<int>& size) const {
        if (!c) return 0;
        return size[c] = 1 + fill(left[c], size) + fill(right[c], size);
    }
};

inline std::vector<int> random_order(int n, std::mt19937_64& rng) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

// ---- random BST subtree-size bounds -------------------------------------------------

struct Interval {
    double lo, hi;
};

/// Proof bounds for P(subtree of the node at rank k has size s), N nodes.
inline Interval subtree_pmf_bounds(int N, int k, int s) {
    const double S = s;
    if (s == N) return {1.0 / N, 1.0 / N};
    const bool up = k + s <= N, down = k - s >= 1;
    if (up && down) {
        const double v = 2.0 / ((S + 1) * (S + 2));
        return {v, v};
    }
    if (up != down) {
        const double lo = 1.0 / ((S + 1) * S);
        return {lo, lo + 2.0 * (S - 1) / ((S + 1) * (S + 2) * S)};
    }
    const double lo = 2.0 / ((S + 1) * S);
    return {lo, lo + 2.0 * (S - 2) / ((S + 1) * (S + 2) * S)};
}

}  // namespace oracle
