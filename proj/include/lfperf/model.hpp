#pragma once

// Full analytical pipeline: resolve, rates, latencies, solve.

#include "lfperf/latency.hpp"
#include "lfperf/rates.hpp"
#include "lfperf/solver.hpp"
#include "lfperf/workload.hpp"

namespace lfperf {

struct Prediction {
    ResolvedStructure resolved;
    RateTable rates;
    LatencyProfile profile;
    ThroughputSolution solution;
};

Prediction predict(const Workload& w, const StructureSpec& s, const PlatformSpec& p);

}  // namespace lfperf
