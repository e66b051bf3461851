#pragma once

// Workload, platform and structure descriptions shared by the analytical
// model, the oracle simulator and the benchmark harness.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lfperf {

using Key = std::int64_t;

enum class OpKind : std::uint8_t { Insert, Delete, Search };

inline constexpr OpKind kAllOps[] = {OpKind::Insert, OpKind::Delete, OpKind::Search};

const char* to_string(OpKind op);

struct UniformKeys {};
struct ZipfKeys {
    double alpha = 1.1;
};
using KeyDistribution = std::variant<UniformKeys, ZipfKeys>;

/// Insert and delete share the update fraction evenly.
struct BalancedMix {
    double update_fraction = 0.0;
};
struct AsymmetricMix {
    double insert_fraction = 0.0;
    double delete_fraction = 0.0;
    double search_fraction = 1.0;
};
using OpMix = std::variant<BalancedMix, AsymmetricMix>;

/// Conditional operation probabilities for one key.
struct OpTriple {
    double ins = 0.0;
    double del = 0.0;
    double src = 1.0;
};

struct WorkloadSpec {
    std::int64_t key_range = 1;
    KeyDistribution key_distribution = UniformKeys{};
    OpMix op_mix = BalancedMix{};
    std::map<Key, OpTriple> per_key_override;
    int threads = 1;
};

/// Validated workload with the key pmf precomputed. Immutable after
/// construction; every accessor is O(1).
class Workload {
public:
    explicit Workload(WorkloadSpec spec);

    const WorkloadSpec& spec() const { return spec_; }
    std::int64_t key_range() const { return spec_.key_range; }
    int threads() const { return spec_.threads; }
    bool is_zipf() const { return std::holds_alternative<ZipfKeys>(spec_.key_distribution); }

    double key_prob(Key k) const;
    /// P(Op = o(k)).
    double op_prob(OpKind o, Key k) const;
    /// Conditional mix for key k (override or global mix).
    OpTriple mix_for(Key k) const;
    /// Probability that the last update on k was an insert. Search-only keys
    /// count as present (structure pre-filled).
    double p_last_insert(Key k) const;
    /// True when no key ever sees an insert or delete.
    bool search_only() const;

    /// Returns a copy with a balanced mix at the given update fraction.
    Workload with_update_fraction(double u) const;
    Workload with_threads(int p) const;

private:
    void check_key(Key k) const;

    WorkloadSpec spec_;
    std::vector<double> pmf_;  // index k-1
    OpTriple global_mix_;
};

double key_prob(const Workload& w, Key k);
double op_select_prob(const Workload& w, OpKind o, Key k);
double p_last_insert(const Workload& w, Key k);

struct CacheLevel {
    double capacity = 0.0;     // cachelines (data) or pages (TLB)
    double hit_latency = 0.0;  // cycles
};

struct PlatformSpec {
    std::vector<CacheLevel> data_cache_levels;
    std::vector<CacheLevel> tlb_levels;
    double memory_latency = 200.0;
    double page_walk_latency = 30.0;
    std::map<int, double> t_cas_by_sockets;
    double t_rec_low = 0.0;
    double t_rec_high = 0.0;
    int cores_per_socket = 1;
    int sockets = 2;
    double t_app = 0.0;
    double t_cmp = 0.0;
    int cacheline_size = 64;
    int page_size = 4096;

    void validate() const;
    int total_cores() const { return cores_per_socket * sockets; }
    int lines_per_page() const { return page_size / cacheline_size; }
};

/// Threads pinned fill-first: socket 0 gets min(P, cores_per_socket).
int threads_on_first_socket(const PlatformSpec& p, int threads);
int active_sockets(const PlatformSpec& p, int threads);
int socket_of_thread(const PlatformSpec& p, int thread_index);
double effective_t_rec(const PlatformSpec& p, int threads);
double effective_t_cas(const PlatformSpec& p, int threads);

enum class StructureKind : std::uint8_t { LinkedList, HashTable, SkipList, ExternalBst };
enum class Layout : std::uint8_t { Padded, Packed };

const char* to_string(StructureKind s);
const char* to_string(Layout l);
StructureKind parse_structure_kind(const std::string& s);
Layout parse_layout(const std::string& s);

struct StructureSpec {
    StructureKind kind = StructureKind::LinkedList;
    int load_factor = 1;            // hash table
    int h_max = 0;                  // skip list; 0 selects ceil(log2 R)
    double appearance_prob = 0.5;   // skip list
    Layout layout = Layout::Padded;
    std::int64_t pages = 0;         // 0 derives from the potential-node count
    int node_size = 0;              // bytes; 0 selects the per-kind default
};

/// A structure resolved against a workload and platform: defaults filled in
/// and all cross-spec invariants checked.
struct ResolvedStructure {
    StructureSpec spec;
    std::int64_t buckets = 0;        // hash table
    int h_max = 0;                   // skip list
    std::int64_t potential_nodes = 0;
    std::int64_t pages = 0;
    double slots = 0.0;              // packed allocation slots
};

ResolvedStructure resolve(const StructureSpec& s, const Workload& w, const PlatformSpec& p);

int default_node_size(StructureKind kind, const PlatformSpec& p);
int default_h_max(std::int64_t key_range);
std::int64_t bucket_count(std::int64_t key_range, int load_factor);

}  // namespace lfperf
