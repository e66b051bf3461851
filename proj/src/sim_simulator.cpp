#include "lfperf/sim/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "lfperf/sim/lru.hpp"

namespace lfperf::sim {

double NodeStats::hit_ratio(std::size_t level) const {
    const std::uint64_t eligible = events - coherence_misses;
    return eligible ? static_cast<double>(dcache_hits[level]) / static_cast<double>(eligible) : 0.0;
}
double NodeStats::tlb_hit_ratio(std::size_t level) const {
    return events ? static_cast<double>(tlb_hits[level]) / static_cast<double>(events) : 0.0;
}
double NodeStats::coherence_ratio() const {
    return events ? static_cast<double>(coherence_misses) / static_cast<double>(events) : 0.0;
}
double NodeStats::stall_ratio() const {
    return events ? static_cast<double>(stalls) / static_cast<double>(events) : 0.0;
}

namespace {

// ---- chained lists (linked list = one bucket holding every key) ----------------

class ChainSim final : public StructureSim {
public:
    ChainSim(Key key_range, int load_factor, bool hash) : r_(key_range), lf_(load_factor) {
        const std::int64_t buckets = (r_ + lf_ - 1) / lf_;
        base_.resize(static_cast<std::size_t>(buckets) + 1);
        present_.assign(static_cast<std::size_t>(r_) + 1, 0);
        std::uint32_t id = 0;
        for (std::int64_t b = 1; b <= buckets; ++b) {
            const Key first = (b - 1) * lf_ + 1;
            const Key last = std::min<Key>(b * lf_, r_);
            base_[static_cast<std::size_t>(b)] = id;
            const std::int64_t bucket = hash ? b : -1;
            desc_.push_back(NodeId{NodeKind::Head, first - 1, -1, bucket, true});
            for (Key k = first; k <= last; ++k) desc_.push_back(NodeId{NodeKind::Node, k, -1, bucket, false});
            desc_.push_back(NodeId{NodeKind::Tail, last + 1, -1, bucket, true});
            id += static_cast<std::uint32_t>(last - first + 3);
        }
        potential_.resize(desc_.size());
        std::iota(potential_.begin(), potential_.end(), 0u);
    }

    Key tracked_key_of(std::uint32_t id) const override {
        return desc_[id].kind == NodeKind::Node ? desc_[id].key : -1;
    }

    void prefill(const std::vector<double>& presence, Rng& rng) override {
        for (Key k = 1; k <= r_; ++k) {
            present_[static_cast<std::size_t>(k)] = rng.bernoulli(presence[static_cast<std::size_t>(k)]);
        }
        count_ = static_cast<std::size_t>(std::count(present_.begin() + 1, present_.end(), 1));
    }

    void apply(const Op& op, bool pinned, Rng&, std::vector<Visit>& out) override {
        const Key t = op.key;
        const std::int64_t b = (t + lf_ - 1) / lf_;
        const Key first = (b - 1) * lf_ + 1;
        const Key last = std::min<Key>(b * lf_, r_);
        const std::uint32_t base = base_[static_cast<std::size_t>(b)];
        auto id_of = [&](Key k) { return base + static_cast<std::uint32_t>(k - first + 1); };

        out.push_back({base, false});
        std::uint32_t pred = base;
        bool found = false;
        std::uint32_t stop = base + static_cast<std::uint32_t>(last - first + 2);  // tail
        for (Key k = first; k <= last; ++k) {
            if (!present_[static_cast<std::size_t>(k)]) continue;
            if (k < t) {
                out.push_back({id_of(k), false});
                pred = id_of(k);
                continue;
            }
            stop = id_of(k);
            found = k == t;
            break;
        }
        out.push_back({stop, false});

        const OpKind kind = (op.kind == OpKind::Delete && pinned) ? OpKind::Search : op.kind;
        if (kind == OpKind::Insert && !found) {
            out.push_back({pred, true});
            present_[static_cast<std::size_t>(t)] = 1;
            ++count_;
        } else if (kind == OpKind::Delete && found) {
            out.push_back({id_of(t), true});
            out.push_back({pred, true});
            present_[static_cast<std::size_t>(t)] = 0;
            --count_;
        }
    }

    bool contains(Key k) const override { return present_[static_cast<std::size_t>(k)] != 0; }
    std::size_t size() const override { return count_; }

private:
    Key r_;
    int lf_;
    std::vector<std::uint32_t> base_;
    std::vector<char> present_;
    std::size_t count_ = 0;
};

// ---- skip list -------------------------------------------------------------------------------

class SkipListSim final : public StructureSim {
public:
    SkipListSim(Key key_range, int h_max, double q) : r_(key_range), hm_(h_max), q_(q) {
        const std::size_t nk = static_cast<std::size_t>(r_) + 2;
        const std::size_t nh = static_cast<std::size_t>(hm_) + 1;
        desc_.resize(2 * nk * nh);
        for (Key k = 0; k <= r_ + 1; ++k) {
            const bool sentinel = k == 0 || k == r_ + 1;
            for (int h = 0; h <= hm_; ++h) {
                desc_[dat(k, h)] = NodeId{NodeKind::SlData, k, h, -1, sentinel};
                desc_[rou(k, h)] = NodeId{NodeKind::SlRouting, k, h, -1, sentinel};
                if (sentinel && h != hm_) continue;
                potential_.push_back(dat(k, h));
                if (h >= 1) potential_.push_back(rou(k, h));
            }
        }
        height_.assign(nk, -1);
        height_[0] = height_[static_cast<std::size_t>(r_) + 1] = hm_;
        levels_.resize(nh);
    }

    Key tracked_key_of(std::uint32_t id) const override {
        const auto& d = desc_[id];
        return d.kind == NodeKind::SlData && !d.sentinel ? d.key : -1;
    }

    void prefill(const std::vector<double>& presence, Rng& rng) override {
        for (Key k = 1; k <= r_; ++k) {
            if (rng.bernoulli(presence[static_cast<std::size_t>(k)])) link(k, draw_height(rng));
        }
    }

    void apply(const Op& op, bool pinned, Rng& rng, std::vector<Visit>& out) override {
        const Key t = op.key;
        read_.clear();
        read_node(0, out);
        Key cur = 0;
        bool found = false;
        std::vector<Key>& pred = pred_;
        pred.assign(static_cast<std::size_t>(hm_) + 1, 0);
        for (int L = hm_; L >= 0 && !found; --L) {
            while (true) {
                const auto it = levels_[L].upper_bound(cur);
                const Key nk = it == levels_[L].end() ? r_ + 1 : *it;
                read_node(nk, out);
                if (nk < t) {
                    cur = nk;
                    continue;
                }
                found = nk == t;
                break;
            }
            pred[L] = cur;
        }

        const OpKind kind = (op.kind == OpKind::Delete && pinned) ? OpKind::Search : op.kind;
        if (kind == OpKind::Insert && !found) {
            const int H = draw_height(rng);
            cas_preds(t, H, out);
            link(t, H);
        } else if (kind == OpKind::Delete && found) {
            const int H = height_[static_cast<std::size_t>(t)];
            out.push_back({dat(t, H), true});
            if (H >= 1) out.push_back({rou(t, H), true});
            cas_preds(t, H, out);
            unlink(t);
        }
    }

    bool contains(Key k) const override { return height_[static_cast<std::size_t>(k)] >= 0; }
    std::size_t size() const override { return levels_[0].size(); }

private:
    std::uint32_t dat(Key k, int h) const {
        return static_cast<std::uint32_t>(static_cast<std::size_t>(k) * (hm_ + 1) + static_cast<std::size_t>(h));
    }
    std::uint32_t rou(Key k, int h) const {
        return static_cast<std::uint32_t>((static_cast<std::size_t>(r_) + 2) * (hm_ + 1)) + dat(k, h);
    }

    int draw_height(Rng& rng) const {
        int h = 0;
        while (h < hm_ && rng.uniform() < q_) ++h;
        return h;
    }

    void link(Key k, int h) {
        height_[static_cast<std::size_t>(k)] = h;
        for (int L = 0; L <= h; ++L) levels_[L].insert(k);
    }
    void unlink(Key k) {
        const int h = height_[static_cast<std::size_t>(k)];
        for (int L = 0; L <= h; ++L) levels_[L].erase(k);
        height_[static_cast<std::size_t>(k)] = -1;
    }

    // Valued node plus its routing node, once per operation.
    void read_node(Key k, std::vector<Visit>& out) {
        if (std::find(read_.begin(), read_.end(), k) != read_.end()) return;
        read_.push_back(k);
        const int h = height_[static_cast<std::size_t>(k)];
        out.push_back({dat(k, h), false});
        if (h >= 1) out.push_back({rou(k, h), false});
    }

    // Link updates at levels 0..H: bottom link lives in the valued node,
    // upper links in the routing node (counted once per node).
    void cas_preds(Key t, int H, std::vector<Visit>& out) {
        Key last_rou = -1;
        for (int L = 0; L <= H; ++L) {
            const auto it = levels_[L].lower_bound(t);
            const Key p = it == levels_[L].begin() ? 0 : *std::prev(it);
            const int hp = height_[static_cast<std::size_t>(p)];
            if (L == 0) {
                out.push_back({dat(p, hp), true});
            } else if (p != last_rou) {
                out.push_back({rou(p, hp), true});
                last_rou = p;
            }
        }
    }

    Key r_;
    int hm_;
    double q_;
    std::vector<int> height_;
    std::vector<std::set<Key>> levels_;
    std::vector<Key> read_;
    std::vector<Key> pred_;
};

// ---- external BST (leaf-oriented, max-rule internal keys) --------------------------------

class BstSim final : public StructureSim {
public:
    explicit BstSim(Key key_range) : r_(key_range) {
        // int(-1), int(0), int(1..R+1), ext(1..R+1)
        desc_.push_back(NodeId{NodeKind::BstInternal, -1, -1, -1, true});
        desc_.push_back(NodeId{NodeKind::BstInternal, 0, -1, -1, true});
        for (Key k = 1; k <= r_ + 1; ++k) desc_.push_back(NodeId{NodeKind::BstInternal, k, -1, -1, false});
        for (Key k = 1; k <= r_ + 1; ++k) {
            desc_.push_back(NodeId{NodeKind::BstExternal, k, -1, -1, k == r_ + 1});
        }
        potential_.resize(desc_.size());
        std::iota(potential_.begin(), potential_.end(), 0u);
        reset();
    }

    Key tracked_key_of(std::uint32_t id) const override {
        const auto& d = desc_[id];
        return d.kind == NodeKind::BstInternal && !d.sentinel && d.key <= r_ ? d.key : -1;
    }

    void prefill(const std::vector<double>& presence, Rng& rng) override {
        reset();
        std::vector<Key> keys;
        for (Key k = 1; k <= r_; ++k) {
            if (rng.bernoulli(presence[static_cast<std::size_t>(k)])) keys.push_back(k);
        }
        for (std::size_t i = keys.size(); i > 1; --i) std::swap(keys[i - 1], keys[rng.below(i)]);
        std::vector<Visit> scratch;
        for (Key k : keys) {
            scratch.clear();
            apply(Op{OpKind::Insert, k}, false, rng, scratch);
        }
    }

    void apply(const Op& op, bool pinned, Rng&, std::vector<Visit>& out) override {
        const Key t = op.key;
        int gp = root_, p = s_, cur = nodes_[s_].left;
        out.push_back({id_of(root_), false});
        out.push_back({id_of(s_), false});
        while (true) {
            out.push_back({id_of(cur), false});
            if (nodes_[cur].leaf) break;
            gp = p;
            p = cur;
            cur = t < nodes_[cur].key ? nodes_[cur].left : nodes_[cur].right;
        }
        const Key m = nodes_[cur].key;
        const OpKind kind = (op.kind == OpKind::Delete && pinned) ? OpKind::Search : op.kind;
        if (kind == OpKind::Insert && m != t) {
            const int leaf = alloc(true, t, -1, -1);
            const int lo = t < m ? leaf : cur, hi = t < m ? cur : leaf;
            const Key ikey = std::max(t, m);
            if (int_live_[static_cast<std::size_t>(ikey)]) throw std::logic_error("duplicate internal key");
            int_live_[static_cast<std::size_t>(ikey)] = 1;
            const int inner = alloc(false, ikey, lo, hi);
            replace_child(p, cur, inner);
            out.push_back({id_of(p), true});
            ++count_;
        } else if (kind == OpKind::Delete && m == t) {
            const int sibling = nodes_[p].left == cur ? nodes_[p].right : nodes_[p].left;
            out.push_back({id_of(p), true});
            out.push_back({id_of(gp), true});
            replace_child(gp, p, sibling);
            int_live_[static_cast<std::size_t>(nodes_[p].key)] = 0;
            release(p);
            release(cur);
            --count_;
        }
    }

    bool contains(Key k) const override {
        int cur = nodes_[s_].left;
        while (!nodes_[cur].leaf) cur = k < nodes_[cur].key ? nodes_[cur].left : nodes_[cur].right;
        return nodes_[cur].key == k;
    }
    std::size_t size() const override { return count_; }

private:
    struct TNode {
        bool leaf = true;
        Key key = 0;
        int left = -1, right = -1;
    };

    void reset() {
        nodes_.clear();
        free_.clear();
        int_live_.assign(static_cast<std::size_t>(r_) + 4, 0);
        count_ = 0;
        const int inf0 = alloc(true, r_ + 1, -1, -1);
        const int inf1 = alloc(true, r_ + 2, -1, -1);
        const int inf2 = alloc(true, r_ + 3, -1, -1);
        s_ = alloc(false, r_ + 2, inf0, inf1);
        root_ = alloc(false, r_ + 3, s_, inf2);
    }

    int alloc(bool leaf, Key key, int l, int r) {
        int i;
        if (!free_.empty()) {
            i = free_.back();
            free_.pop_back();
        } else {
            i = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
        }
        nodes_[i] = TNode{leaf, key, l, r};
        return i;
    }
    void release(int i) { free_.push_back(i); }

    void replace_child(int parent, int old_child, int new_child) {
        if (nodes_[parent].left == old_child) {
            nodes_[parent].left = new_child;
        } else {
            nodes_[parent].right = new_child;
        }
    }

    std::uint32_t id_of(int node) const {
        const TNode& n = nodes_[node];
        if (n.leaf) return static_cast<std::uint32_t>(r_ + 2 + n.key);
        if (node == root_) return 0;
        if (node == s_) return 1;
        return static_cast<std::uint32_t>(n.key + 1);
    }

    Key r_;
    std::vector<TNode> nodes_;
    std::vector<int> free_;
    std::vector<char> int_live_;
    int root_ = -1, s_ = -1;
    std::size_t count_ = 0;
};

}  // namespace

std::unique_ptr<StructureSim> make_structure_sim(const ResolvedStructure& s, Key key_range) {
    switch (s.spec.kind) {
        case StructureKind::LinkedList:
            return std::make_unique<ChainSim>(key_range, static_cast<int>(key_range), false);
        case StructureKind::HashTable: return std::make_unique<ChainSim>(key_range, s.spec.load_factor, true);
        case StructureKind::SkipList: return std::make_unique<SkipListSim>(key_range, s.h_max, s.spec.appearance_prob);
        case StructureKind::ExternalBst: return std::make_unique<BstSim>(key_range);
    }
    throw std::invalid_argument("unsupported structure");
}

MemoryLayout make_layout(const StructureSim& sim, const ResolvedStructure& s, const PlatformSpec& p,
                         Placement placement, std::uint64_t seed) {
    MemoryLayout lay;
    const std::size_t per_page = static_cast<std::size_t>(p.lines_per_page());
    const bool packed = s.spec.layout == Layout::Packed;
    const std::size_t per_line = packed ? 2 : 1;
    lay.pages = static_cast<std::size_t>(s.pages);
    lay.lines = lay.pages * per_page;
    const std::size_t slots = lay.lines * per_line;
    const auto& nodes = sim.potential_nodes();
    if (nodes.size() > slots) throw std::invalid_argument("layout: more nodes than allocation slots");

    std::vector<std::uint32_t> slot_of(nodes.size());
    if (placement == Placement::Sequential) {
        std::iota(slot_of.begin(), slot_of.end(), 0u);
    } else {
        std::vector<std::uint32_t> all(slots);
        std::iota(all.begin(), all.end(), 0u);
        Rng rng(derive_seed(seed, 0x1a70u));
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            std::swap(all[i], all[i + rng.below(slots - i)]);
        }
        std::copy(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(nodes.size()), slot_of.begin());
    }
    lay.line_of.assign(sim.node_count(), MemoryLayout::kNoLine);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        lay.line_of[nodes[i]] = static_cast<std::uint32_t>(slot_of[i] / per_line);
    }
    lay.page_of.resize(lay.lines);
    for (std::size_t l = 0; l < lay.lines; ++l) lay.page_of[l] = static_cast<std::uint32_t>(l / per_page);
    return lay;
}

namespace {

struct ThreadState {
    explicit ThreadState(const Workload& w, std::uint64_t seed, std::size_t lines, std::size_t pages)
        : gen(w, seed), dcache(lines), tlb(pages), seen(lines, 0) {}

    OpGenerator gen;
    LruStack dcache;
    LruStack tlb;
    std::vector<std::uint32_t> seen;
    std::vector<Visit> visits;
    std::size_t next_visit = 0;
    double t = 0.0;
    std::size_t ops_started = 0;
    double measure_start = -1.0;
    std::uint64_t measured_ops = 0;
    int socket = 0;
    std::uint64_t op_stamp = 0;
    std::map<Key, double> last_seen;       // tracked key -> last visit time
    std::map<Key, std::uint64_t> stamped;  // tracked key -> op that last counted it
};

struct LineState {
    std::uint32_t version = 0;
    int last_writer = -1;
    double busy_from = 0.0;
    double busy_until = 0.0;
};

}  // namespace

SimReport simulate_full(const SimConfig& cfg) {
    const Workload w(cfg.workload);
    const PlatformSpec& plat = cfg.platform;
    plat.validate();
    const ResolvedStructure rs = resolve(cfg.structure, w, plat);
    const int P = w.threads();
    if (P > plat.total_cores()) throw std::invalid_argument("thread count exceeds topology");
    if (cfg.ops_per_thread < 1) throw std::invalid_argument("ops_per_thread must be >= 1");

    auto sim = make_structure_sim(rs, w.key_range());
    std::set<Key> tracked(cfg.tracked_keys.begin(), cfg.tracked_keys.end());
    for (Key k : tracked) {
        if (k < 1 || k > w.key_range()) throw std::invalid_argument("tracked key out of range");
    }
    std::vector<double> presence = presence_vector(w);
    for (Key k : tracked) presence[static_cast<std::size_t>(k)] = 1.0;
    Rng fill_rng(derive_seed(cfg.seed, 0xF111u));
    sim->prefill(presence, fill_rng);

    const MemoryLayout lay = make_layout(*sim, rs, plat, cfg.placement, cfg.seed);
    const std::size_t nd = plat.data_cache_levels.size();
    const std::size_t nt = plat.tlb_levels.size();
    const double t_cas = effective_t_cas(plat, P);

    std::vector<LineState> lines(lay.lines);
    std::vector<std::unique_ptr<ThreadState>> threads;
    for (int i = 0; i < P; ++i) {
        threads.push_back(std::make_unique<ThreadState>(w, derive_seed(cfg.seed, 0x7000u + static_cast<std::uint64_t>(i)),
                                                        lay.lines, lay.pages));
        threads.back()->socket = socket_of_thread(plat, i);
    }
    std::vector<Rng> struct_rng;
    for (int i = 0; i < P; ++i) struct_rng.emplace_back(derive_seed(cfg.seed, 0x5000u + static_cast<std::uint64_t>(i)));

    std::vector<NodeStats> stats(sim->node_count());
    std::vector<std::uint64_t> level_hits(nd, 0), tlb_level_hits(nt, 0);
    std::uint64_t total_events = 0, coh_events = 0, stall_events = 0;

    SimReport rep;
    for (Key k : tracked) rep.interarrival[k];

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (int i = 0; i < P; ++i) queue.emplace(0.0, i);
    const std::size_t quota = cfg.warmup_ops_per_thread + cfg.ops_per_thread;
    double stop_time = -1.0;

    // A thread that is still the earliest after its step keeps running
    // without a round trip through the heap; order is unchanged.
    int running = -1;
    auto reschedule = [&](int tid, double t) {
        if (queue.empty() || Entry{t, tid} < queue.top()) {
            running = tid;
        } else {
            queue.emplace(t, tid);
            running = -1;
        }
    };
    while (running >= 0 || !queue.empty()) {
        int tid = running;
        if (tid < 0) {
            tid = queue.top().second;
            queue.pop();
        }
        ThreadState& th = *threads[static_cast<std::size_t>(tid)];
        const bool measuring = th.measure_start >= 0.0;

        if (th.next_visit == th.visits.size()) {
            // Operation boundary.
            if (th.ops_started > 0 && measuring) ++th.measured_ops;
            if (th.ops_started == cfg.warmup_ops_per_thread && th.measure_start < 0.0) th.measure_start = th.t;
            if (th.ops_started == quota) {
                stop_time = th.t;
                break;
            }
            th.t += plat.t_app;
            const Op op = th.gen.next();
            th.visits.clear();
            th.next_visit = 0;
            sim->apply(op, tracked.count(op.key) > 0, struct_rng[static_cast<std::size_t>(tid)], th.visits);
            ++th.ops_started;
            ++th.op_stamp;
            if (th.measure_start >= 0.0) {
                ++rep.measured_ops;
                if (rep.events_per_op_hist.size() <= th.visits.size()) rep.events_per_op_hist.resize(th.visits.size() + 1);
                ++rep.events_per_op_hist[th.visits.size()];
            }
            reschedule(tid, th.t);
            continue;
        }

        const Visit v = th.visits[th.next_visit++];
        const std::uint32_t line = lay.line_of[v.node];
        LineState& ls = lines[line];
        double t = th.t;
        double stall = 0.0;
        if (ls.last_writer != tid && t >= ls.busy_from && t < ls.busy_until) {
            stall = ls.busy_until - t;
            t += stall;
        }
        double cost = 0.0;
        const bool coherence = ls.last_writer >= 0 && ls.last_writer != tid && th.seen[line] != ls.version;
        int hit_level = static_cast<int>(nd);
        if (coherence) {
            const int ws = socket_of_thread(plat, ls.last_writer);
            cost += ws == th.socket ? plat.t_rec_low : plat.t_rec_high;
            th.dcache.access(line);
        } else {
            const std::uint64_t d = th.dcache.access(line);
            for (std::size_t l = 0; l < nd; ++l) {
                if (d != LruStack::kCold && d < plat.data_cache_levels[l].capacity) {
                    hit_level = static_cast<int>(l);
                    break;
                }
            }
            cost += hit_level < static_cast<int>(nd) ? plat.data_cache_levels[static_cast<std::size_t>(hit_level)].hit_latency
                                                     : plat.memory_latency;
        }
        th.seen[line] = ls.version;

        const std::uint64_t pd = th.tlb.access(lay.page_of[line]);
        int tlb_level = static_cast<int>(nt);
        for (std::size_t l = 0; l < nt; ++l) {
            if (pd != LruStack::kCold && pd < plat.tlb_levels[l].capacity) {
                tlb_level = static_cast<int>(l);
                break;
            }
        }
        cost += tlb_level < static_cast<int>(nt) ? plat.tlb_levels[static_cast<std::size_t>(tlb_level)].hit_latency
                                                 : plat.page_walk_latency;
        cost += plat.t_cmp;

        if (v.cas) {
            const double start = t + cost;
            cost += t_cas;
            ++ls.version;
            ls.last_writer = tid;
            th.seen[line] = ls.version;
            ls.busy_from = start;
            ls.busy_until = start + t_cas;
            for (int o = 0; o < P; ++o) {
                if (o != tid) threads[static_cast<std::size_t>(o)]->dcache.invalidate(line);
            }
        }

        if (measuring) {
            NodeStats& ns = stats[v.node];
            if (ns.events == 0) {
                ns.dcache_hits.assign(nd, 0);
                ns.tlb_hits.assign(nt, 0);
            }
            ++ns.events;
            ++total_events;
            if (v.cas) ++ns.cas;
            if (stall > 0.0) {
                ++ns.stalls;
                ++stall_events;
                ns.stall_cycles += stall;
            }
            if (coherence) {
                ++ns.coherence_misses;
                ++coh_events;
            } else {
                for (std::size_t l = static_cast<std::size_t>(std::min<int>(hit_level, static_cast<int>(nd))); l < nd; ++l) {
                    ++ns.dcache_hits[l];
                    ++level_hits[l];
                }
            }
            for (std::size_t l = static_cast<std::size_t>(tlb_level); l < nt; ++l) {
                ++ns.tlb_hits[l];
                ++tlb_level_hits[l];
            }
        }

        if (!tracked.empty() && !v.cas) {
            const Key k = sim->tracked_key_of(v.node);
            if (k >= 0 && tracked.count(k)) {
                auto& stamp = th.stamped[k];
                if (stamp != th.op_stamp) {
                    stamp = th.op_stamp;
                    auto it = th.last_seen.find(k);
                    if (it != th.last_seen.end() && measuring) rep.interarrival[k].push_back(t - it->second);
                    th.last_seen[k] = t;
                }
            }
        }

        th.t = t + cost;
        reschedule(tid, th.t);
    }

    double throughput = 0.0;
    for (const auto& th : threads) {
        if (th->measure_start >= 0.0 && stop_time > th->measure_start) {
            throughput += static_cast<double>(th->measured_ops) / (stop_time - th->measure_start);
        }
    }
    rep.throughput = throughput;
    rep.lines = lay.lines;
    rep.pages = lay.pages;

    std::uint64_t ev = 0, ops = 0;
    for (std::size_t n = 0; n < rep.events_per_op_hist.size(); ++n) {
        ev += n * rep.events_per_op_hist[n];
        ops += rep.events_per_op_hist[n];
    }
    rep.mean_events_per_op = ops ? static_cast<double>(ev) / static_cast<double>(ops) : 0.0;

    const std::uint64_t eligible = total_events - coh_events;
    for (std::size_t l = 0; l < nd; ++l) {
        rep.dcache_hit_ratio.push_back(eligible ? static_cast<double>(level_hits[l]) / static_cast<double>(eligible) : 0.0);
    }
    for (std::size_t l = 0; l < nt; ++l) {
        rep.tlb_hit_ratio.push_back(total_events ? static_cast<double>(tlb_level_hits[l]) / static_cast<double>(total_events)
                                                 : 0.0);
    }
    rep.coherence_ratio = total_events ? static_cast<double>(coh_events) / static_cast<double>(total_events) : 0.0;
    rep.stall_ratio = total_events ? static_cast<double>(stall_events) / static_cast<double>(total_events) : 0.0;
    for (std::uint32_t id = 0; id < stats.size(); ++id) {
        if (stats[id].events == 0) continue;
        stats[id].id = sim->describe(id);
        rep.nodes.push_back(std::move(stats[id]));
    }
    return rep;
}

}  // namespace lfperf::sim
