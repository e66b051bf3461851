#pragma once

// Presence probabilities and per-node Read/CAS event rates for the four
// structures. Rates are normalized by throughput and expressed per thread:
// a = (1/P) * sum over (op, key) of P(op) * P(op triggers event | node present).

#include <cstdint>
#include <string>
#include <vector>

#include "lfperf/workload.hpp"

namespace lfperf {

enum class NodeKind : std::uint8_t {
    App,          // synthetic application node
    Head,         // list / bucket head sentinel
    Tail,         // list / bucket tail sentinel
    Node,         // list or hash-table node
    SlData,       // skip-list valued node
    SlRouting,    // skip-list routing node
    BstInternal,
    BstExternal,
};

const char* to_string(NodeKind k);

enum class EventKind : std::uint8_t { Read, Cas };

struct NodeId {
    NodeKind kind = NodeKind::App;
    Key key = 0;
    int height = -1;            // skip-list height or BST virtual index; -1 when absent
    std::int64_t bucket = -1;   // hash table only (1-based)
    bool sentinel = false;
};

struct RateEntry {
    NodeId id;
    double presence = 0.0;
    double a_read = 0.0;
    double a_cas = 0.0;

    double a_all() const { return a_read + a_cas; }
};

/// entries[0] is always the application node (p = 1, a_read = 1, a_cas = 0).
struct RateTable {
    StructureKind structure = StructureKind::LinkedList;
    int threads = 1;
    std::vector<RateEntry> entries;

    /// Expected number of node events per operation, app node excluded.
    double events_per_op() const;
};

// ---- linked list: presence indexed by key, p[0] = p[R+1] = 1 -------------

double ll_read_prob(Key target, Key node, const std::vector<double>& presence);
double ll_cas_prob(Key target, Key node, OpKind op, const std::vector<double>& presence);

// ---- hash table: slot indices within a bucket chain, 0 and n+1 sentinels --

double ht_prob(std::int64_t target_bucket, Key target_slot, std::int64_t bucket, Key slot,
               EventKind ev, OpKind op, const std::vector<double>& bucket_presence);

/// Maps a key to (bucket, slot), both 1-based.
std::pair<std::int64_t, Key> ht_locate(Key k, int load_factor);

// ---- skip list -----------------------------------------------------------

/// Height distribution: (1-q) q^h for h < h_max, remaining tail at h_max.
std::vector<double> sl_height_pmf(int h_max, double q = 0.5);

double sl_presence(int h, double p_in, int h_max, double q = 0.5);

/// Presence-aware skip-list probability oracle. Keys 1..R; p_in indexed by
/// key with p_in[0] = p_in[R+1] = 1 for the head/tail sentinels (height h_max).
class SkipListModel {
public:
    SkipListModel(std::vector<double> p_in, int h_max, double q = 0.5);

    Key key_range() const { return static_cast<Key>(p_in_.size()) - 2; }
    int h_max() const { return h_max_; }
    /// Probability that key x is present with height >= m.
    double present_at_least(Key x, int m) const;

    double read_prob(NodeKind z, Key k, int h, Key target) const;
    double cas_prob(NodeKind z, Key k, int h, Key target, OpKind op) const;

private:
    std::vector<double> p_in_;
    int h_max_;
    double q_;
    std::vector<double> pmf_;
};

// ---- external BST ---------------------------------------------------------

/// Internal nodes carry keys 1..R; presence indexed by key with entries 0 and
/// R+1 unused. Traversal probabilities use the expected interval count.
double bst_read_internal(Key target, Key k, const std::vector<double>& presence);
/// External leaf reads; k = R+1 is the sentinel leaf above every key.
double bst_read_external(Key target, Key k, const std::vector<double>& presence);

struct BstRouteWeights {
    double left = 0.0;
    double right = 0.0;
};
/// Probability that a random internal node on the route to `target` routes left / right.
BstRouteWeights bst_route_weights(Key target, const std::vector<double>& presence);

/// CAS attribution to internal node k for an update on target.
double bst_cas_prob(Key target, Key k, OpKind op, const std::vector<double>& presence);

struct VirtualShare {
    int h = 1;
    double presence = 0.0;
    double a_read = 0.0;
    double a_cas = 0.0;
};

/// Splits one internal node into n virtual nodes by subtree size.
/// Throws when n < 2.
std::vector<VirtualShare> bst_virtual_decompose(int n, double presence, double a_read,
                                                double a_cas, bool zipf_keys);

/// Expected live internal-node count, rounded up.
int bst_virtual_count(const std::vector<double>& presence);

// ---- table construction -----------------------------------------------------

/// Presence vector indexed 0..R+1 with sentinels at 1.
std::vector<double> presence_vector(const Workload& w);

RateTable build_rate_table(const Workload& w, const ResolvedStructure& s);

}  // namespace lfperf
