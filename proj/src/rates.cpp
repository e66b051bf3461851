#include "lfperf/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfperf {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::App: return "app";
        case NodeKind::Head: return "head";
        case NodeKind::Tail: return "tail";
        case NodeKind::Node: return "node";
        case NodeKind::SlData: return "dat";
        case NodeKind::SlRouting: return "rou";
        case NodeKind::BstInternal: return "int";
        case NodeKind::BstExternal: return "ext";
    }
    return "?";
}

double RateTable::events_per_op() const {
    double s = 0.0;
    for (std::size_t i = 1; i < entries.size(); ++i) s += entries[i].presence * entries[i].a_all();
    return s * threads;
}

// ---- linked list --------------------------------------------------------------

double ll_read_prob(Key target, Key node, const std::vector<double>& p) {
    if (node <= target) return 1.0;
    double prod = 1.0;
    for (Key i = target; i < node; ++i) prod *= 1.0 - p[static_cast<std::size_t>(i)];
    return prod;
}

double ll_cas_prob(Key target, Key node, OpKind op, const std::vector<double>& p) {
    if (op == OpKind::Search) return 0.0;
    if (op == OpKind::Insert) {
        if (node >= target) return 0.0;
        double prod = 1.0;
        for (Key i = node + 1; i <= target; ++i) prod *= 1.0 - p[static_cast<std::size_t>(i)];
        return prod;
    }
    if (node == target) return 1.0;
    if (node > target) return 0.0;
    double prod = p[static_cast<std::size_t>(target)];
    for (Key i = node + 1; i < target; ++i) prod *= 1.0 - p[static_cast<std::size_t>(i)];
    return prod;
}

// ---- hash table -----------------------------------------------------------------

double ht_prob(std::int64_t target_bucket, Key target_slot, std::int64_t bucket, Key slot,
               EventKind ev, OpKind op, const std::vector<double>& bucket_presence) {
    if (target_bucket != bucket) return 0.0;
    if (ev == EventKind::Read) return ll_read_prob(target_slot, slot, bucket_presence);
    return ll_cas_prob(target_slot, slot, op, bucket_presence);
}

std::pair<std::int64_t, Key> ht_locate(Key k, int load_factor) {
    const std::int64_t b = (k + load_factor - 1) / load_factor;
    return {b, k - (b - 1) * load_factor};
}

// ---- skip list ----------------------------------------------------------------------

std::vector<double> sl_height_pmf(int h_max, double q) {
    std::vector<double> pmf(static_cast<std::size_t>(h_max) + 1);
    double tail = 1.0;
    for (int h = 0; h < h_max; ++h) {
        pmf[h] = tail * (1.0 - q);
        tail *= q;
    }
    pmf[h_max] = tail;
    return pmf;
}

double sl_presence(int h, double p_in, int h_max, double q) {
    if (h < 0 || h > h_max) throw std::out_of_range("height out of range");
    return p_in * sl_height_pmf(h_max, q)[h];
}

SkipListModel::SkipListModel(std::vector<double> p_in, int h_max, double q)
    : p_in_(std::move(p_in)), h_max_(h_max), q_(q), pmf_(sl_height_pmf(h_max, q)) {
    if (p_in_.size() < 3) throw std::invalid_argument("presence vector needs sentinels");
}

double SkipListModel::present_at_least(Key x, int m) const {
    if (m > h_max_) return 0.0;
    return p_in_[static_cast<std::size_t>(x)] * std::pow(q_, std::max(m, 0));
}

double SkipListModel::read_prob(NodeKind z, Key k, int h, Key target) const {
    if (z == NodeKind::SlRouting && h < 1) return 0.0;
    if (k == 0 || k == target) return 1.0;
    double prod = 1.0;
    if (k < target) {
        for (Key x = k + 1; x <= target; ++x) prod *= 1.0 - present_at_least(x, h + 1);
    } else {
        for (Key x = target; x < k; ++x) prod *= 1.0 - present_at_least(x, h);
    }
    return prod;
}

double SkipListModel::cas_prob(NodeKind z, Key k, int h, Key target, OpKind op) const {
    if (op == OpKind::Search) return 0.0;
    if (z == NodeKind::SlRouting && h < 1) return 0.0;
    if (k == target) return op == OpKind::Delete ? 1.0 : 0.0;
    if (k > target) return 0.0;
    auto gap = [&](int m) {
        double prod = 1.0;
        for (Key x = k + 1; x < target; ++x) prod *= 1.0 - present_at_least(x, m);
        return prod;
    };
    double mass = 0.0;
    if (z == NodeKind::SlData) {
        mass = gap(0);
    } else {
        // The update touches routing level min(h, H) of k, H the target's height.
        for (int H = 1; H <= h_max_; ++H) mass += pmf_[H] * gap(std::min(h, H));
    }
    const double pt = p_in_[static_cast<std::size_t>(target)];
    return (op == OpKind::Insert ? 1.0 - pt : pt) * mass;
}

// ---- external BST -------------------------------------------------------------------

double bst_read_internal(Key target, Key k, const std::vector<double>& p) {
    double s = 0.0;
    if (k > target) {
        for (Key i = target + 1; i < k; ++i) s += p[static_cast<std::size_t>(i)];
    } else {
        for (Key i = k + 1; i <= target; ++i) s += p[static_cast<std::size_t>(i)];
    }
    return 1.0 / (1.0 + s);
}

double bst_read_external(Key target, Key k, const std::vector<double>& p) {
    if (k == target) return 1.0;
    double prod = 1.0;
    if (k < target) {
        for (Key i = k + 1; i <= target; ++i) prod *= 1.0 - p[static_cast<std::size_t>(i)];
    } else {
        for (Key i = 1; i < k; ++i) prod *= 1.0 - p[static_cast<std::size_t>(i)];
    }
    return prod;
}

BstRouteWeights bst_route_weights(Key target, const std::vector<double>& p) {
    const Key r = static_cast<Key>(p.size()) - 2;
    double cl = 0.0, cr = 0.0;
    double s = 0.0;
    for (Key k = target; k >= 1; --k) {
        if (k < target) s += p[static_cast<std::size_t>(k + 1)];
        cr += p[static_cast<std::size_t>(k)] / (1.0 + s);
    }
    s = 0.0;
    for (Key k = target + 1; k <= r; ++k) {
        if (k > target + 1) s += p[static_cast<std::size_t>(k - 1)];
        cl += p[static_cast<std::size_t>(k)] / (1.0 + s);
    }
    if (cl + cr <= 0.0) return {0.5, 0.5};
    return {cl / (cl + cr), cr / (cl + cr)};
}

namespace {

// Weighted CAS mass given first/second order statistic probabilities.
double bst_case_mix(OpKind op, double pt, const BstRouteWeights& w, double p_inf, double p_inf2,
                    double p_sup, double p_sup2) {
    const double l = w.left, r = w.right;
    if (op == OpKind::Delete) {
        return pt * (l * l * p_inf2 + l * (r + 1.0) * p_inf + r * (l + 1.0) * p_sup + r * r * p_sup2);
    }
    return (1.0 - pt) * (l * l * p_inf2 + l * r * p_inf + r * l * p_sup + r * r * p_sup2);
}

}  // namespace

double bst_cas_prob(Key target, Key k, OpKind op, const std::vector<double>& p) {
    if (op == OpKind::Search || k == target) return 0.0;
    const BstRouteWeights w = bst_route_weights(target, p);
    // e0: no present key strictly between; e1: exactly one.
    double e0 = 1.0, e1 = 0.0;
    const Key lo = std::min(k, target) + 1, hi = std::max(k, target);
    for (Key i = lo; i < hi; ++i) {
        const double pi = p[static_cast<std::size_t>(i)];
        e1 = e1 * (1.0 - pi) + e0 * pi;
        e0 *= 1.0 - pi;
    }
    const double pt = p[static_cast<std::size_t>(target)];
    if (k < target) return bst_case_mix(op, pt, w, 0.0, 0.0, e0, e1);
    return bst_case_mix(op, pt, w, e0, e1, 0.0, 0.0);
}

std::vector<VirtualShare> bst_virtual_decompose(int n, double presence, double a_read, double a_cas,
                                                bool zipf_keys) {
    if (n < 2) throw std::invalid_argument("virtual decomposition needs at least two nodes");
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    double total = 0.0;
    for (int h = 1; h < n; ++h) {
        w[h] = 2.0 / ((h + 1.0) * (h + 1.0));
        total += w[h];
    }
    w[n] = 1.0 / n;
    total += w[n];
    double moment = 0.0;
    for (int h = 1; h <= n; ++h) {
        w[h] /= total;
        moment += w[h] * h;
    }
    const double c2 = 1.0 / moment;
    const double low = w[1] + (n >= 2 ? w[2] : 0.0) + (n >= 3 ? w[3] : 0.0);

    std::vector<VirtualShare> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int h = 1; h <= n; ++h) {
        VirtualShare v;
        v.h = h;
        v.presence = presence * w[h];
        v.a_read = c2 * h * a_read;
        if (zipf_keys) {
            v.a_cas = a_cas;
        } else {
            v.a_cas = h <= 3 ? a_cas / low : 0.0;
        }
        out.push_back(v);
    }
    return out;
}

int bst_virtual_count(const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) s += p[i];
    return static_cast<int>(std::ceil(s - 1e-9));
}

// ---- table construction ----------------------------------------------------------------

std::vector<double> presence_vector(const Workload& w) {
    const Key r = w.key_range();
    std::vector<double> p(static_cast<std::size_t>(r) + 2, 1.0);
    for (Key k = 1; k <= r; ++k) p[static_cast<std::size_t>(k)] = w.p_last_insert(k);
    return p;
}

namespace {

struct OpWeights {
    std::vector<double> all, ins, del;  // indexed by key
};

OpWeights op_weights(const Workload& w) {
    const auto n = static_cast<std::size_t>(w.key_range()) + 2;
    OpWeights o{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (Key k = 1; k <= w.key_range(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        o.ins[i] = w.op_prob(OpKind::Insert, k);
        o.del[i] = w.op_prob(OpKind::Delete, k);
        o.all[i] = o.ins[i] + o.del[i] + w.op_prob(OpKind::Search, k);
    }
    return o;
}

RateEntry make_entry(NodeKind kind, Key key, int height, double presence, bool sentinel = false,
                     std::int64_t bucket = -1) {
    RateEntry e;
    e.id = NodeId{kind, key, height, bucket, sentinel};
    e.presence = presence;
    return e;
}

// Chain of n slots with head/tail sentinels; ops given per slot.
// Appends entries for head, slots and tail in order.
void build_chain(const std::vector<double>& p, const std::vector<double>& all,
                 const std::vector<double>& ins, const std::vector<double>& del, Key key_offset,
                 std::int64_t bucket, std::vector<RateEntry>& out) {
    const Key n = static_cast<Key>(p.size()) - 2;
    std::vector<double> read(p.size(), 0.0), cas(p.size(), 0.0);
    for (Key t = 1; t <= n; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        // Reads: every node at or before t, then the first present node after.
        for (Key k = 0; k <= t; ++k) read[static_cast<std::size_t>(k)] += all[ti];
        double prod = 1.0;
        for (Key k = t + 1; k <= n + 1; ++k) {
            prod *= 1.0 - p[static_cast<std::size_t>(k - 1)];
            if (prod == 0.0) break;
            read[static_cast<std::size_t>(k)] += all[ti] * prod;
        }
        // CAS: predecessor of t, plus the node itself on delete.
        cas[ti] += del[ti];
        double gap = 1.0;  // prod over (k, t) of absence
        for (Key k = t - 1; k >= 0; --k) {
            const double mass = ins[ti] * gap * (1.0 - p[ti]) + del[ti] * gap * p[ti];
            cas[static_cast<std::size_t>(k)] += mass;
            gap *= 1.0 - p[static_cast<std::size_t>(k)];
            if (gap == 0.0) break;
        }
    }
    for (Key k = 0; k <= n + 1; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const NodeKind kind = k == 0 ? NodeKind::Head : k == n + 1 ? NodeKind::Tail : NodeKind::Node;
        const bool sentinel = kind != NodeKind::Node;
        const Key key = sentinel ? (k == 0 ? key_offset : key_offset + n + 1) : key_offset + k;
        RateEntry e = make_entry(kind, key, -1, p[i], sentinel, bucket);
        e.a_read = read[i];
        e.a_cas = cas[i];
        out.push_back(e);
    }
}

void build_list(const Workload& w, const OpWeights& o, RateTable& t) {
    const auto p = presence_vector(w);
    build_chain(p, o.all, o.ins, o.del, 0, -1, t.entries);
}

void build_hash(const Workload& w, const ResolvedStructure& s, const OpWeights& o, RateTable& t) {
    const auto pin = presence_vector(w);
    const int lf = s.spec.load_factor;
    const Key r = w.key_range();
    for (std::int64_t b = 1; b <= s.buckets; ++b) {
        const Key first = (b - 1) * lf + 1;
        const Key last = std::min<Key>(b * lf, r);
        const auto n = static_cast<std::size_t>(last - first + 1);
        std::vector<double> p(n + 2, 1.0), all(n + 2, 0.0), ins(n + 2, 0.0), del(n + 2, 0.0);
        for (std::size_t j = 1; j <= n; ++j) {
            const auto g = static_cast<std::size_t>(first) + j - 1;
            p[j] = pin[g];
            all[j] = o.all[g];
            ins[j] = o.ins[g];
            del[j] = o.del[g];
        }
        // Global keys: head at first-1, tail at last+1 (bucket disambiguates).
        build_chain(p, all, ins, del, first - 1, b, t.entries);
    }
}

void build_skip_list(const Workload& w, const ResolvedStructure& s, const OpWeights& o, RateTable& t) {
    const auto pin = presence_vector(w);
    const Key r = w.key_range();
    const int hm = s.h_max;
    const double q = s.spec.appearance_prob;
    const auto pmf = sl_height_pmf(hm, q);
    std::vector<double> qpow(static_cast<std::size_t>(hm) + 2, 0.0);
    for (int m = 0; m <= hm; ++m) qpow[m] = std::pow(q, m);  // qpow[hm+1] = 0
    std::vector<double> tail_mass(static_cast<std::size_t>(hm) + 2, 0.0);
    for (int m = hm; m >= 0; --m) tail_mass[m] = tail_mass[m + 1] + pmf[m];

    const auto nk = static_cast<std::size_t>(r) + 2;
    const auto nh = static_cast<std::size_t>(hm) + 1;
    std::vector<double> rd(nk * nh, 0.0), cd(nk * nh, 0.0), cr(nk * nh, 0.0);
    auto at = [nh](Key k, int h) { return static_cast<std::size_t>(k) * nh + static_cast<std::size_t>(h); };

    std::vector<double> prod(nh + 1), gap(nh + 1);
    for (Key tk = 1; tk <= r; ++tk) {
        const auto ti = static_cast<std::size_t>(tk);
        const double wr = o.all[ti];
        const double wc = o.ins[ti] * (1.0 - pin[ti]) + o.del[ti] * pin[ti];
        if (wr == 0.0) continue;
        for (int h = 0; h <= hm; ++h) {
            rd[at(tk, h)] += wr;
            cd[at(tk, h)] += o.del[ti];
        }
        // Downward sweep: reads use heights >= h+1 on (k, t]; CAS gaps use (k, t).
        std::fill(prod.begin(), prod.end(), 1.0);
        std::fill(gap.begin(), gap.end(), 1.0);
        for (Key k = tk - 1; k >= 0; --k) {
            const auto x = static_cast<std::size_t>(k + 1);
            for (int m = 0; m <= hm; ++m) prod[m] *= 1.0 - pin[x] * qpow[m];
            if (k + 1 < tk) {
                for (int m = 0; m <= hm; ++m) gap[m] *= 1.0 - pin[x] * qpow[m];
            }
            const int h_lo = k == 0 ? hm : 0;
            double prefix = 0.0;  // sum_{H=1}^{h-1} pmf[H] * gap[H]
            for (int h = 0; h <= hm; ++h) {
                if (h >= 1 && h - 1 >= 1) prefix += pmf[h - 1] * gap[h - 1];
                if (h < h_lo) continue;
                const double read = h + 1 <= hm ? prod[h + 1] : 1.0;
                rd[at(k, h)] += wr * read;
                if (wc != 0.0) {
                    cd[at(k, h)] += wc * gap[0];
                    if (h >= 1) cr[at(k, h)] += wc * (prefix + gap[h] * tail_mass[h]);
                }
            }
        }
        // Upward sweep: reads use heights >= h on [t, k).
        std::fill(prod.begin(), prod.end(), 1.0);
        for (Key k = tk + 1; k <= r + 1; ++k) {
            const auto x = static_cast<std::size_t>(k - 1);
            double live = 0.0;
            for (int m = 0; m <= hm; ++m) {
                prod[m] *= 1.0 - pin[x] * qpow[m];
                live += prod[m];
            }
            if (live == 0.0) break;
            const int h_lo = k == r + 1 ? hm : 0;
            for (int h = h_lo; h <= hm; ++h) rd[at(k, h)] += wr * prod[h];
        }
    }

    for (Key k = 0; k <= r + 1; ++k) {
        const bool sentinel = k == 0 || k == r + 1;
        const int h_lo = sentinel ? hm : 0;
        for (int h = h_lo; h <= hm; ++h) {
            const double pres = sentinel ? 1.0 : pin[static_cast<std::size_t>(k)] * pmf[h];
            RateEntry d = make_entry(NodeKind::SlData, k, h, pres, sentinel);
            d.a_read = rd[at(k, h)];
            d.a_cas = cd[at(k, h)];
            t.entries.push_back(d);
            if (h >= 1) {
                RateEntry ro = make_entry(NodeKind::SlRouting, k, h, pres, sentinel);
                ro.a_read = rd[at(k, h)];
                ro.a_cas = cr[at(k, h)];
                t.entries.push_back(ro);
            }
        }
    }
}

void build_bst(const Workload& w, const OpWeights& o, RateTable& t) {
    const auto p = presence_vector(w);
    const Key r = w.key_range();
    const auto n = static_cast<std::size_t>(r) + 2;
    std::vector<double> prefix(n, 0.0);  // prefix[i] = sum_{j<=i} p_j over real keys
    for (Key k = 1; k <= r; ++k) {
        prefix[static_cast<std::size_t>(k)] = prefix[static_cast<std::size_t>(k - 1)] + p[static_cast<std::size_t>(k)];
    }
    auto range_sum = [&](Key a, Key b) {  // sum over [a, b]
        if (b < a) return 0.0;
        return prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a - 1)];
    };

    std::vector<double> int_read(n, 0.0), int_cas(n, 0.0), ext_read(n, 0.0), ext_cas(n, 0.0);
    double sentinel_read = 0.0;
    // Leaf k > t is reached only when no key below k is present.
    std::vector<double> none_below(n, 1.0);
    for (Key k = 2; k <= r + 1; ++k) {
        none_below[static_cast<std::size_t>(k)] =
            none_below[static_cast<std::size_t>(k - 1)] * (1.0 - p[static_cast<std::size_t>(k - 1)]);
    }

    for (Key tk = 1; tk <= r; ++tk) {
        const auto ti = static_cast<std::size_t>(tk);
        const double wr = o.all[ti];
        if (wr == 0.0) continue;
        sentinel_read += wr;
        double cl = 0.0, cr = 0.0;
        for (Key k = 1; k <= r; ++k) {
            const double f = k > tk ? 1.0 / (1.0 + range_sum(tk + 1, k - 1)) : 1.0 / (1.0 + range_sum(k + 1, tk));
            int_read[static_cast<std::size_t>(k)] += wr * f;
            (k > tk ? cl : cr) += p[static_cast<std::size_t>(k)] * f;
        }
        ext_read[ti] += wr;
        double prod = 1.0;
        for (Key k = tk - 1; k >= 1; --k) {
            prod *= 1.0 - p[static_cast<std::size_t>(k + 1)];
            if (prod == 0.0) break;
            ext_read[static_cast<std::size_t>(k)] += wr * prod;
        }
        for (Key k = tk + 1; k <= r + 1; ++k) ext_read[static_cast<std::size_t>(k)] += wr * none_below[static_cast<std::size_t>(k)];
        // Search-only ops never CAS.
        if (o.ins[ti] == 0.0 && o.del[ti] == 0.0) continue;

        const BstRouteWeights rw = cl + cr > 0.0 ? BstRouteWeights{cl / (cl + cr), cr / (cl + cr)}
                                                 : BstRouteWeights{0.5, 0.5};
        const double pt = p[ti];
        double e0 = 1.0, e1 = 0.0;
        for (Key k = tk - 1; k >= 1; --k) {
            const double m = o.ins[ti] * bst_case_mix(OpKind::Insert, pt, rw, 0, 0, e0, e1) +
                             o.del[ti] * bst_case_mix(OpKind::Delete, pt, rw, 0, 0, e0, e1);
            int_cas[static_cast<std::size_t>(k)] += m;
            const double pk = p[static_cast<std::size_t>(k)];
            e1 = e1 * (1.0 - pk) + e0 * pk;
            e0 *= 1.0 - pk;
            if (e0 + e1 == 0.0) break;
        }
        e0 = 1.0;
        e1 = 0.0;
        for (Key k = tk + 1; k <= r; ++k) {
            const double m = o.ins[ti] * bst_case_mix(OpKind::Insert, pt, rw, e0, e1, 0, 0) +
                             o.del[ti] * bst_case_mix(OpKind::Delete, pt, rw, e0, e1, 0, 0);
            int_cas[static_cast<std::size_t>(k)] += m;
            const double pk = p[static_cast<std::size_t>(k)];
            e1 = e1 * (1.0 - pk) + e0 * pk;
            e0 *= 1.0 - pk;
            if (e0 + e1 == 0.0) break;
        }
    }

    RateEntry root = make_entry(NodeKind::BstInternal, -1, -1, 1.0, true);
    root.a_read = sentinel_read;
    RateEntry s = make_entry(NodeKind::BstInternal, 0, -1, 1.0, true);
    s.a_read = sentinel_read;
    t.entries.push_back(root);
    t.entries.push_back(s);
    // Internal made by the first insert above leaf R+1; every key routes through it.
    RateEntry top = make_entry(NodeKind::BstInternal, r + 1, -1, 1.0, true);
    top.a_read = sentinel_read;
    t.entries.push_back(top);

    const int nv = bst_virtual_count(p);
    const bool zipf = w.is_zipf();
    for (Key k = 1; k <= r; ++k) {
        const auto i = static_cast<std::size_t>(k);
        if (nv >= 2) {
            for (const auto& v : bst_virtual_decompose(nv, p[i], int_read[i], int_cas[i], zipf)) {
                RateEntry e = make_entry(NodeKind::BstInternal, k, v.h, v.presence);
                e.a_read = v.a_read;
                e.a_cas = v.a_cas;
                t.entries.push_back(e);
            }
        } else {
            RateEntry e = make_entry(NodeKind::BstInternal, k, 1, p[i]);
            e.a_read = int_read[i];
            e.a_cas = int_cas[i];
            t.entries.push_back(e);
        }
    }
    for (Key k = 1; k <= r + 1; ++k) {
        const auto i = static_cast<std::size_t>(k);
        RateEntry e = make_entry(NodeKind::BstExternal, k, -1, k == r + 1 ? 1.0 : p[i], k == r + 1);
        e.a_read = ext_read[i];
        e.a_cas = ext_cas[i];
        t.entries.push_back(e);
    }
}

}  // namespace

RateTable build_rate_table(const Workload& w, const ResolvedStructure& s) {
    RateTable t;
    t.structure = s.spec.kind;
    t.threads = w.threads();
    RateEntry app = make_entry(NodeKind::App, 0, -1, 1.0, true);
    app.a_read = 1.0;
    t.entries.push_back(app);

    const OpWeights o = op_weights(w);
    switch (s.spec.kind) {
        case StructureKind::LinkedList: build_list(w, o, t); break;
        case StructureKind::HashTable: build_hash(w, s, o, t); break;
        case StructureKind::SkipList: build_skip_list(w, s, o, t); break;
        case StructureKind::ExternalBst: build_bst(w, o, t); break;
    }
    const double inv_p = 1.0 / t.threads;
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
        t.entries[i].a_read *= inv_p;
        t.entries[i].a_cas *= inv_p;
    }
    return t;
}

}  // namespace lfperf
