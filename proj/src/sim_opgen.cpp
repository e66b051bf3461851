#include "lfperf/sim/opgen.hpp"

#include <algorithm>

namespace lfperf::sim {

OpGenerator::OpGenerator(const Workload& w, std::uint64_t seed) : w_(&w), rng_(seed) {
    if (w.is_zipf()) {
        cdf_.resize(static_cast<std::size_t>(w.key_range()));
        double acc = 0.0;
        for (Key k = 1; k <= w.key_range(); ++k) {
            acc += w.key_prob(k);
            cdf_[static_cast<std::size_t>(k - 1)] = acc;
        }
        cdf_.back() = 1.0;
    }
}

Key OpGenerator::next_key() {
    if (cdf_.empty()) return static_cast<Key>(rng_.below(static_cast<std::uint64_t>(w_->key_range()))) + 1;
    const double u = rng_.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<Key>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1)) + 1;
}

Op OpGenerator::next() {
    Op op;
    op.key = next_key();
    const OpTriple t = w_->mix_for(op.key);
    const double u = rng_.uniform();
    if (u < t.ins) {
        op.kind = OpKind::Insert;
    } else if (u < t.ins + t.del) {
        op.kind = OpKind::Delete;
    } else {
        op.kind = OpKind::Search;
    }
    return op;
}

std::vector<Op> gen_ops(const Workload& w, std::uint64_t seed, std::size_t n) {
    OpGenerator g(w, seed);
    std::vector<Op> out(n);
    for (auto& op : out) op = g.next();
    return out;
}

}  // namespace lfperf::sim
