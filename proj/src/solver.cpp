#include "lfperf/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace lfperf {

double ThroughputSolution::residual() const {
    return A * T * T + Bq * T - threads;
}

double occupancy_weight(const RateTable& rates, std::size_t i) {
    if (i == 0) return 1.0;
    const auto& e = rates.entries[i];
    return rates.threads * e.presence * e.a_all();
}

ThroughputSolution solve(const RateTable& rates, const LatencyProfile& profile) {
    if (rates.entries.empty() || rates.entries[0].id.kind != NodeKind::App) {
        throw std::invalid_argument("rate table lacks the application node");
    }
    if (profile.size() != rates.entries.size()) throw std::invalid_argument("profile/rate table size mismatch");
    ThroughputSolution sol;
    sol.threads = rates.threads;
    const std::size_t n = rates.entries.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = occupancy_weight(rates, i);
        sol.A += w * profile.b[i];
        sol.Bq += w * profile.c[i];
    }
    if (!(sol.Bq > 0.0)) throw std::invalid_argument("malformed profile: Bq <= 0");
    const double P = rates.threads;
    if (sol.A < 1e-18) {
        sol.T = P / sol.Bq;
    } else {
        // Rationalized root avoids cancellation when A is small.
        sol.T = 2.0 * P / (sol.Bq + std::sqrt(sol.Bq * sol.Bq + 4.0 * sol.A * P));
    }
    sol.events_per_op = rates.events_per_op();
    sol.occupancy.resize(n);
    FactorShares& f = sol.shares;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = occupancy_weight(rates, i);
        sol.occupancy[i] = w * sol.T * (profile.b[i] * sol.T + profile.c[i]);
        if (i == 0) {
            f.app += w * profile.c[0];
            continue;
        }
        f.stall += w * profile.b[i] * sol.T;
        f.compute += w * (profile.c[i] - profile.e_cas[i] - profile.e_rec[i] - profile.e_cache[i] - profile.e_tlb[i]);
        f.cas += w * profile.e_cas[i];
        f.recovery += w * profile.e_rec[i];
        f.cache += w * profile.e_cache[i];
        f.tlb += w * profile.e_tlb[i];
    }
    return sol;
}

}  // namespace lfperf
