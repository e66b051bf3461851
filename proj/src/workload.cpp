#include "lfperf/workload.hpp"

#include <cmath>
#include <numeric>

namespace lfperf {

namespace {

void check_fraction(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0,1]");
    }
}

void check_triple(const OpTriple& t, const char* what) {
    check_fraction(t.ins, what);
    check_fraction(t.del, what);
    check_fraction(t.src, what);
    if (std::abs(t.ins + t.del + t.src - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(what) + " fractions must sum to 1");
    }
}

OpTriple triple_of(const OpMix& mix) {
    if (const auto* b = std::get_if<BalancedMix>(&mix)) {
        check_fraction(b->update_fraction, "update fraction");
        return {b->update_fraction / 2.0, b->update_fraction / 2.0, 1.0 - b->update_fraction};
    }
    const auto& a = std::get<AsymmetricMix>(mix);
    OpTriple t{a.insert_fraction, a.delete_fraction, a.search_fraction};
    check_triple(t, "operation mix");
    return t;
}

}  // namespace

const char* to_string(OpKind op) {
    switch (op) {
        case OpKind::Insert: return "insert";
        case OpKind::Delete: return "delete";
        case OpKind::Search: return "search";
    }
    return "?";
}

Workload::Workload(WorkloadSpec spec) : spec_(std::move(spec)) {
    if (spec_.key_range < 1) throw std::invalid_argument("key range must be >= 1");
    if (spec_.threads < 1) throw std::invalid_argument("thread count must be >= 1");
    global_mix_ = triple_of(spec_.op_mix);
    for (const auto& [k, t] : spec_.per_key_override) {
        if (k < 1 || k > spec_.key_range) throw std::invalid_argument("override key out of range");
        check_triple(t, "per-key override");
    }

    const auto r = static_cast<std::size_t>(spec_.key_range);
    pmf_.assign(r, 1.0 / static_cast<double>(r));
    if (const auto* z = std::get_if<ZipfKeys>(&spec_.key_distribution)) {
        if (!(z->alpha > 0.0)) throw std::invalid_argument("zipf alpha must be > 0");
        // Summed from the smallest term up to limit rounding.
        double h = 0.0;
        for (std::size_t j = r; j >= 1; --j) h += std::pow(static_cast<double>(j), -z->alpha);
        for (std::size_t j = 1; j <= r; ++j) {
            pmf_[j - 1] = std::pow(static_cast<double>(j), -z->alpha) / h;
        }
    }
}

void Workload::check_key(Key k) const {
    if (k < 1 || k > spec_.key_range) throw std::out_of_range("key out of range");
}

double Workload::key_prob(Key k) const {
    check_key(k);
    return pmf_[static_cast<std::size_t>(k - 1)];
}

OpTriple Workload::mix_for(Key k) const {
    if (!spec_.per_key_override.empty()) {
        if (auto it = spec_.per_key_override.find(k); it != spec_.per_key_override.end()) {
            return it->second;
        }
    }
    return global_mix_;
}

double Workload::op_prob(OpKind o, Key k) const {
    const double pk = key_prob(k);
    const OpTriple t = mix_for(k);
    switch (o) {
        case OpKind::Insert: return pk * t.ins;
        case OpKind::Delete: return pk * t.del;
        case OpKind::Search: return pk * t.src;
    }
    return 0.0;
}

double Workload::p_last_insert(Key k) const {
    check_key(k);
    const OpTriple t = mix_for(k);
    const double upd = t.ins + t.del;
    if (upd <= 0.0) return 1.0;
    return t.ins / upd;
}

bool Workload::search_only() const {
    if (global_mix_.ins + global_mix_.del > 0.0) return false;
    for (const auto& [k, t] : spec_.per_key_override) {
        if (t.ins + t.del > 0.0) return false;
    }
    return true;
}

Workload Workload::with_update_fraction(double u) const {
    WorkloadSpec s = spec_;
    s.op_mix = BalancedMix{u};
    return Workload(std::move(s));
}

Workload Workload::with_threads(int p) const {
    WorkloadSpec s = spec_;
    s.threads = p;
    return Workload(std::move(s));
}

double key_prob(const Workload& w, Key k) { return w.key_prob(k); }
double op_select_prob(const Workload& w, OpKind o, Key k) { return w.op_prob(o, k); }
double p_last_insert(const Workload& w, Key k) { return w.p_last_insert(k); }

void PlatformSpec::validate() const {
    auto check_levels = [](const std::vector<CacheLevel>& levels, const char* what) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i].capacity > 0.0)) {
                throw std::invalid_argument(std::string(what) + " capacity must be positive");
            }
            if (levels[i].hit_latency < 0.0) {
                throw std::invalid_argument(std::string(what) + " latency must be >= 0");
            }
            if (i > 0 && !(levels[i].capacity > levels[i - 1].capacity)) {
                throw std::invalid_argument(std::string(what) +
                                            " capacities must strictly increase across levels");
            }
        }
    };
    check_levels(data_cache_levels, "data cache");
    check_levels(tlb_levels, "TLB");
    if (data_cache_levels.empty()) throw std::invalid_argument("at least one data cache level required");
    if (memory_latency < 0 || page_walk_latency < 0 || t_rec_low < 0 || t_rec_high < 0 || t_app < 0 ||
        t_cmp < 0) {
        throw std::invalid_argument("latencies must be >= 0");
    }
    if (t_rec_high < t_rec_low) throw std::invalid_argument("t_rec.high must be >= t_rec.low");
    if (cores_per_socket < 1 || sockets < 1) throw std::invalid_argument("topology must be positive");
    if (t_cas_by_sockets.empty()) throw std::invalid_argument("t_cas not configured");
    for (const auto& [n, v] : t_cas_by_sockets) {
        if (v < 0) throw std::invalid_argument("t_cas must be >= 0");
    }
    if (cacheline_size <= 0 || page_size <= 0 || page_size % cacheline_size != 0) {
        throw std::invalid_argument("cacheline size must divide page size");
    }
}

int threads_on_first_socket(const PlatformSpec& p, int threads) {
    return std::min(threads, p.cores_per_socket);
}

int active_sockets(const PlatformSpec& p, int threads) {
    if (threads > p.total_cores()) throw std::invalid_argument("thread count exceeds topology");
    return threads <= p.cores_per_socket ? 1 : 2;
}

int socket_of_thread(const PlatformSpec& p, int thread_index) {
    return thread_index / p.cores_per_socket;
}

double effective_t_rec(const PlatformSpec& p, int threads) {
    if (threads < 1 || threads > p.total_cores()) {
        throw std::invalid_argument("thread count exceeds topology");
    }
    const double share = static_cast<double>(threads_on_first_socket(p, threads)) / threads;
    return p.t_rec_low + 2.0 * share * (1.0 - share) * (p.t_rec_high - p.t_rec_low);
}

double effective_t_cas(const PlatformSpec& p, int threads) {
    const int s = active_sockets(p, threads);
    if (auto it = p.t_cas_by_sockets.find(s); it != p.t_cas_by_sockets.end()) return it->second;
    // Fall back to the largest configured socket count below s.
    auto it = p.t_cas_by_sockets.upper_bound(s);
    if (it == p.t_cas_by_sockets.begin()) return it->second;
    return std::prev(it)->second;
}

const char* to_string(StructureKind s) {
    switch (s) {
        case StructureKind::LinkedList: return "ll";
        case StructureKind::HashTable: return "ht";
        case StructureKind::SkipList: return "sl";
        case StructureKind::ExternalBst: return "bst";
    }
    return "?";
}

const char* to_string(Layout l) { return l == Layout::Padded ? "padded" : "packed"; }

StructureKind parse_structure_kind(const std::string& s) {
    if (s == "ll" || s == "linkedlist") return StructureKind::LinkedList;
    if (s == "ht" || s == "hashtable") return StructureKind::HashTable;
    if (s == "sl" || s == "skiplist") return StructureKind::SkipList;
    if (s == "bst" || s == "tree") return StructureKind::ExternalBst;
    throw std::invalid_argument("unknown structure '" + s + "'");
}

Layout parse_layout(const std::string& s) {
    if (s == "padded") return Layout::Padded;
    if (s == "packed") return Layout::Packed;
    throw std::invalid_argument("unknown layout '" + s + "'");
}

int default_node_size(StructureKind kind, const PlatformSpec& p) {
    switch (kind) {
        case StructureKind::LinkedList:
        case StructureKind::HashTable: return 24;  // key, value, next
        default: return p.cacheline_size;
    }
}

int default_h_max(std::int64_t key_range) {
    int h = 0;
    while ((std::int64_t{1} << h) < key_range) ++h;
    return std::max(h, 1);
}

std::int64_t bucket_count(std::int64_t key_range, int load_factor) {
    return (key_range + load_factor - 1) / load_factor;
}

ResolvedStructure resolve(const StructureSpec& s, const Workload& w, const PlatformSpec& p) {
    ResolvedStructure r;
    r.spec = s;
    const std::int64_t keys = w.key_range();
    if (r.spec.node_size == 0) r.spec.node_size = default_node_size(s.kind, p);
    if (r.spec.node_size < 0) throw std::invalid_argument("node size must be positive");

    switch (s.kind) {
        case StructureKind::LinkedList:
            r.potential_nodes = keys + 2;
            break;
        case StructureKind::HashTable:
            if (s.load_factor < 1) throw std::invalid_argument("load factor must be >= 1");
            r.buckets = bucket_count(keys, s.load_factor);
            r.potential_nodes = keys + 2 * r.buckets;
            break;
        case StructureKind::SkipList:
            if (!(s.appearance_prob > 0.0 && s.appearance_prob < 1.0)) {
                throw std::invalid_argument("appearance probability must be in (0,1)");
            }
            r.h_max = s.h_max > 0 ? s.h_max : default_h_max(keys);
            r.potential_nodes = keys * (2 * r.h_max + 1) + 4;
            break;
        case StructureKind::ExternalBst:
            // internals -1, 0, 1..R+1 and leaves 1..R+1
            r.potential_nodes = 2 * keys + 4;
            break;
    }

    const bool packed = s.layout == Layout::Packed;
    if (packed) {
        if (s.kind == StructureKind::SkipList || s.kind == StructureKind::ExternalBst) {
            throw std::invalid_argument("packed layout unsupported for skip list and tree nodes");
        }
        if (2 * r.spec.node_size > p.cacheline_size) {
            throw std::invalid_argument("packed layout needs two nodes per cacheline");
        }
    }

    const std::int64_t lines_needed = packed ? (r.potential_nodes + 1) / 2 : r.potential_nodes;
    const std::int64_t per_page = p.lines_per_page();
    const std::int64_t min_pages = (lines_needed + per_page - 1) / per_page;
    if (s.pages < 0) throw std::invalid_argument("page count must be positive");
    r.pages = s.pages > 0 ? s.pages : min_pages;
    // Live footprint is bounded by one slot per potential node.
    if (r.pages < min_pages) throw std::invalid_argument("page count too small for worst-case footprint");
    r.slots = 2.0 * static_cast<double>(r.pages) * static_cast<double>(per_page);
    return r;
}

}  // namespace lfperf
