#include "lfperf/model.hpp"

namespace lfperf {

Prediction predict(const Workload& w, const StructureSpec& s, const PlatformSpec& p) {
    Prediction out;
    out.resolved = resolve(s, w, p);
    out.rates = build_rate_table(w, out.resolved);
    out.profile = build_latency_profile(out.rates, out.resolved, p);
    out.solution = solve(out.rates, out.profile);
    return out;
}

}  // namespace lfperf
