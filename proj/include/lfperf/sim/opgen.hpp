#pragma once

// Memoryless, stationary operation stream drawn from a Workload.

#include <cstdint>
#include <vector>

#include "lfperf/sim/rng.hpp"
#include "lfperf/workload.hpp"

namespace lfperf::sim {

struct Op {
    OpKind kind = OpKind::Search;
    Key key = 1;
};

class OpGenerator {
public:
    OpGenerator(const Workload& w, std::uint64_t seed);

    Op next();
    Key next_key();
    Rng& rng() { return rng_; }

private:
    const Workload* w_;
    Rng rng_;
    std::vector<double> cdf_;  // empty for uniform keys
};

std::vector<Op> gen_ops(const Workload& w, std::uint64_t seed, std::size_t n);

}  // namespace lfperf::sim
