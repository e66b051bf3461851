#pragma once

// Expected traversal latency per node, split as E[Traverse_i] = b_i * T + c_i.

#include <optional>
#include <vector>

#include "lfperf/rates.hpp"
#include "lfperf/workload.hpp"

namespace lfperf {

/// Characteristic time of one cache level, in the same normalized time
/// scale as the rates it was computed from.
struct CharTime {
    bool never_fills = false;
    double t = 0.0;
};

double cas_execute(double a_read, double a_cas, double t_cas);
/// Coefficient of T in the expected stall time.
double stall_coeff(double a_cas, int threads, double t_cas);
/// Probability that a traversal pays an invalidation recovery.
double recovery_prob(double a_read, double a_cas, int threads);
double recovery(double a_read, double a_cas, int threads, double t_rec);

/// Root of sum_i p_i (1 - exp(-rate_i t)) = C; safeguarded Newton.
CharTime char_time(const std::vector<double>& presence, const std::vector<double>& rate, double capacity);
double che_hit(double rate, const CharTime& ct);

/// Root of M (1 - prod_i (1 - p_i (1 - exp(-rate_i t)) / M)) = C.
CharTime tlb_char_time(const std::vector<double>& presence, const std::vector<double>& rate, double pages,
                       double capacity);
/// Page reference rate seen by node i's page.
std::vector<double> tlb_page_rates(const std::vector<double>& presence, const std::vector<double>& rate,
                                   double pages);

struct PackingAdjustment {
    double slots = 0.0;
    std::vector<double> addi_read;  // aligned with RateTable entries
    std::vector<double> addi_cas;
};

PackingAdjustment packing_adjust(const RateTable& table, double slots);

/// Per-node factors, structure-of-arrays aligned with RateTable entries.
struct LatencyProfile {
    int threads = 1;
    double t_cas = 0.0;
    double t_rec = 0.0;
    std::size_t dcache_levels = 0;
    std::size_t tlb_levels = 0;
    std::vector<CharTime> dcache_char;
    std::vector<CharTime> tlb_char;

    std::vector<double> b, c, e_cas, e_stall_coeff, e_rec, p_coh, e_cache, e_tlb;
    /// Cumulative hit probability, node-major: hit[i * levels + l].
    std::vector<double> dcache_hit, tlb_hit;

    double hit(std::size_t node, std::size_t level) const { return dcache_hit[node * dcache_levels + level]; }
    double tlb(std::size_t node, std::size_t level) const { return tlb_hit[node * tlb_levels + level]; }
    std::size_t size() const { return b.size(); }
};

LatencyProfile build_latency_profile(const RateTable& table, const ResolvedStructure& s,
                                     const PlatformSpec& platform);

}  // namespace lfperf
