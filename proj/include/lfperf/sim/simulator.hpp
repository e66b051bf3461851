#pragma once

// Sequential discrete-event oracle. P logical threads replay exact traversals
// of a logical structure against private LRU data caches and TLBs, with a
// per-cacheline single-writer coherence state, and accrue platform latencies.

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "lfperf/rates.hpp"
#include "lfperf/sim/opgen.hpp"
#include "lfperf/sim/rng.hpp"
#include "lfperf/workload.hpp"

namespace lfperf::sim {

/// How potential nodes are laid out over allocation slots. Sequential places
/// node i in slot i; Random scatters nodes uniformly over all slots (seeded).
enum class Placement : std::uint8_t { Sequential, Random };

struct SimConfig {
    WorkloadSpec workload;
    StructureSpec structure;
    PlatformSpec platform;
    std::uint64_t seed = 1;
    std::size_t ops_per_thread = 10000;
    std::size_t warmup_ops_per_thread = 10000;
    std::vector<Key> tracked_keys;
    Placement placement = Placement::Random;
};

/// One node event emitted by a traversal.
struct Visit {
    std::uint32_t node = 0;
    bool cas = false;
};

struct NodeStats {
    NodeId id;
    std::uint64_t events = 0;
    std::uint64_t cas = 0;
    std::uint64_t coherence_misses = 0;
    std::uint64_t stalls = 0;
    double stall_cycles = 0.0;
    std::vector<std::uint64_t> dcache_hits;  // cumulative: hit at level <= l
    std::vector<std::uint64_t> tlb_hits;

    double hit_ratio(std::size_t level) const;
    double tlb_hit_ratio(std::size_t level) const;
    double coherence_ratio() const;
    double stall_ratio() const;
};

struct SimReport {
    double throughput = 0.0;  // operations per cycle, summed over threads
    std::uint64_t measured_ops = 0;
    double mean_events_per_op = 0.0;
    std::vector<std::uint64_t> events_per_op_hist;  // index = events in the op
    std::vector<NodeStats> nodes;                   // nodes with >= 1 measured event
    std::map<Key, std::vector<double>> interarrival;  // per tracked key, gap cycles
    std::vector<double> dcache_hit_ratio;              // aggregate, cumulative by level
    std::vector<double> tlb_hit_ratio;
    double coherence_ratio = 0.0;
    double stall_ratio = 0.0;
    std::size_t lines = 0;
    std::size_t pages = 0;
};

/// Logical structure replayed by the simulator. Node ids are dense; the
/// subset in potential_nodes() corresponds to the analytical node set.
class StructureSim {
public:
    virtual ~StructureSim() = default;

    std::size_t node_count() const { return desc_.size(); }
    const NodeId& describe(std::uint32_t id) const { return desc_[id]; }
    const std::vector<std::uint32_t>& potential_nodes() const { return potential_; }
    /// Key whose Poisson process is tracked through this node, or -1.
    virtual Key tracked_key_of(std::uint32_t id) const = 0;

    /// Fills the structure: key k present with probability presence[k].
    virtual void prefill(const std::vector<double>& presence, Rng& rng) = 0;
    /// Applies op atomically, appending its events. Deletes of `pinned`
    /// keys are demoted to searches.
    virtual void apply(const Op& op, bool pinned, Rng& rng, std::vector<Visit>& out) = 0;
    virtual bool contains(Key k) const = 0;
    virtual std::size_t size() const = 0;

protected:
    std::vector<NodeId> desc_;
    std::vector<std::uint32_t> potential_;
};

std::unique_ptr<StructureSim> make_structure_sim(const ResolvedStructure& s, Key key_range);

/// Maps node ids to cachelines and lines to pages.
struct MemoryLayout {
    std::vector<std::uint32_t> line_of;  // per node id; kNoLine for unused ids
    std::vector<std::uint32_t> page_of;  // per line
    std::size_t lines = 0;
    std::size_t pages = 0;
    static constexpr std::uint32_t kNoLine = 0xFFFFFFFFu;
};

MemoryLayout make_layout(const StructureSim& sim, const ResolvedStructure& s, const PlatformSpec& p,
                         Placement placement, std::uint64_t seed);

SimReport simulate_full(const SimConfig& cfg);

}  // namespace lfperf::sim
