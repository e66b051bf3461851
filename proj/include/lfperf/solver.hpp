#pragma once

// Little's law closure: sum of node occupancies equals the thread count,
// giving A T^2 + Bq T - P = 0.

#include <string>
#include <vector>

#include "lfperf/latency.hpp"
#include "lfperf/rates.hpp"

namespace lfperf {

struct FactorShares {
    double app = 0.0;
    double compute = 0.0;
    double cas = 0.0;
    double stall = 0.0;
    double recovery = 0.0;
    double cache = 0.0;
    double tlb = 0.0;
};

struct ThroughputSolution {
    double T = 0.0;        // operations per cycle
    double A = 0.0;
    double Bq = 0.0;
    int threads = 1;
    double events_per_op = 0.0;
    std::vector<double> occupancy;  // aligned with the rate table
    FactorShares shares;            // cycles per operation, by factor

    double ops_per_second(double hz) const { return T * hz; }
    double residual() const;
};

/// Event weight of entry i in the occupancy sum: P p_i a_i for structure
/// nodes, 1 for the application node (one app event per operation).
double occupancy_weight(const RateTable& rates, std::size_t i);

ThroughputSolution solve(const RateTable& rates, const LatencyProfile& profile);

}  // namespace lfperf
