#include "lfperf/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace lfperf {

double cas_execute(double a_read, double a_cas, double t_cas) {
    const double total = a_read + a_cas;
    if (!(total > 0.0)) throw std::invalid_argument("cas_execute: zero total rate");
    return t_cas * a_cas / total;
}

double stall_coeff(double a_cas, int threads, double t_cas) {
    return a_cas * (threads - 1) * t_cas * t_cas / 2.0;
}

double recovery_prob(double a_read, double a_cas, int threads) {
    const double den = a_cas * threads + a_read;
    if (!(den > 0.0)) return 0.0;
    return a_cas * (threads - 1) / den;
}

double recovery(double a_read, double a_cas, int threads, double t_rec) {
    return recovery_prob(a_read, a_cas, threads) * t_rec;
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    }
}

// Root of a strictly increasing f with f(0) < 0 and f(inf) > 0. fd(t)
// returns {f, f'}. Newton steps are taken inside a shrinking bracket and
// replaced by bisection when they leave it. Rates are normalized to max 1
// so that rescaling the inputs leaves the normalized root untouched.
constexpr double kRootTol = 1e-12;

template <class F>
double solve_increasing(F&& fd) {
    auto [f, d] = fd(0.0);
    // Both masked sums are concave near 0, so the first Newton step from 0
    // undershoots the root.
    double lo = 0.0, hi = d > 0.0 ? -f / d : 1.0;
    std::tie(f, d) = fd(hi);
    while (f < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("characteristic time bracket diverged");
        std::tie(f, d) = fd(hi);
    }
    double t = hi;
    for (int it = 0; it < 400; ++it) {
        (f < 0.0 ? lo : hi) = t;
        if (f == 0.0 || hi - lo <= kRootTol * hi) break;
        double next = d > 0.0 ? t - f / d : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool done = std::abs(next - t) <= kRootTol * t;
        t = next;
        if (done) break;
        std::tie(f, d) = fd(t);
    }
    return t;
}

double max_rate(const std::vector<double>& rate) {
    double m = 0.0;
    for (double r : rate) m = std::max(m, r);
    return m;
}

}  // namespace

CharTime char_time(const std::vector<double>& presence, const std::vector<double>& rate, double capacity) {
    if (presence.size() != rate.size()) throw std::invalid_argument("char_time: size mismatch");
    check_finite(presence, "presence");
    check_finite(rate, "rate");
    if (!(capacity > 0.0) || !std::isfinite(capacity)) throw std::invalid_argument("capacity must be positive");
    double reachable = 0.0;
    for (std::size_t i = 0; i < rate.size(); ++i) {
        if (rate[i] > 0.0) reachable += presence[i];
    }
    if (reachable <= capacity) return {true, 0.0};
    const double scale = max_rate(rate);
    std::vector<double> rn(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) rn[i] = rate[i] / scale;
    const double tau = solve_increasing([&](double t) {
        double s = 0.0, d = 0.0;
        for (std::size_t i = 0; i < rn.size(); ++i) {
            const double e = std::expm1(-rn[i] * t);
            s -= presence[i] * e;
            d += presence[i] * rn[i] * (1.0 + e);
        }
        return std::pair{s - capacity, d};
    });
    return {false, tau / scale};
}

double che_hit(double rate, const CharTime& ct) {
    if (ct.never_fills) return 1.0;
    return -std::expm1(-rate * ct.t);
}

CharTime tlb_char_time(const std::vector<double>& presence, const std::vector<double>& rate, double pages,
                       double capacity) {
    if (presence.size() != rate.size()) throw std::invalid_argument("tlb_char_time: size mismatch");
    check_finite(presence, "presence");
    check_finite(rate, "rate");
    if (!(pages >= 1.0) || !(capacity >= 1.0)) throw std::invalid_argument("pages and TLB capacity must be >= 1");
    if (pages <= capacity) return {true, 0.0};
    const double scale = max_rate(rate);
    if (!(scale > 0.0)) return {true, 0.0};
    std::vector<double> rn(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) rn[i] = rate[i] / scale;
    // Limit of the touched-page count as t grows; may stay below capacity.
    double log_untouched = 0.0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
        if (rn[i] > 0.0) log_untouched += std::log1p(-presence[i] / pages);
    }
    if (pages * -std::expm1(log_untouched) <= capacity) return {true, 0.0};
    const double tau = solve_increasing([&](double t) {
        double lg = 0.0, dlg = 0.0;
        for (std::size_t i = 0; i < rn.size(); ++i) {
            const double e = std::expm1(-rn[i] * t);
            const double u = presence[i] * e / pages;
            lg += std::log1p(u);
            dlg -= presence[i] * rn[i] * (1.0 + e) / pages / (1.0 + u);
        }
        return std::pair{pages * -std::expm1(lg) - capacity, -pages * std::exp(lg) * dlg};
    });
    return {false, tau / scale};
}

std::vector<double> tlb_page_rates(const std::vector<double>& presence, const std::vector<double>& rate,
                                   double pages) {
    double total = 0.0;
    for (std::size_t i = 0; i < rate.size(); ++i) total += presence[i] * rate[i];
    std::vector<double> z(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) {
        const double others = std::max(0.0, total - presence[i] * rate[i]);
        z[i] = rate[i] + others / pages;
    }
    return z;
}

PackingAdjustment packing_adjust(const RateTable& table, double slots) {
    if (!(slots > 1.0)) throw std::invalid_argument("packing needs more than one slot");
    PackingAdjustment adj;
    adj.slots = slots;
    const std::size_t n = table.entries.size();
    adj.addi_read.assign(n, 0.0);
    adj.addi_cas.assign(n, 0.0);
    double sr = 0.0, sc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        sr += table.entries[i].presence * table.entries[i].a_read;
        sc += table.entries[i].presence * table.entries[i].a_cas;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const auto& e = table.entries[i];
        adj.addi_read[i] = std::max(0.0, sr - e.presence * e.a_read) / (slots - 1.0);
        adj.addi_cas[i] = std::max(0.0, sc - e.presence * e.a_cas) / (slots - 1.0);
    }
    return adj;
}

LatencyProfile build_latency_profile(const RateTable& table, const ResolvedStructure& s,
                                     const PlatformSpec& platform) {
    platform.validate();
    const int P = table.threads;
    LatencyProfile prof;
    prof.threads = P;
    prof.t_cas = effective_t_cas(platform, P);
    prof.t_rec = effective_t_rec(platform, P);
    const std::size_t n = table.entries.size();
    const std::size_t nd = platform.data_cache_levels.size();
    const std::size_t nt = platform.tlb_levels.size();
    prof.dcache_levels = nd;
    prof.tlb_levels = nt;

    const bool packed = s.spec.layout == Layout::Packed;
    PackingAdjustment adj;
    if (packed) {
        adj = packing_adjust(table, s.slots);
    } else {
        adj.addi_read.assign(n, 0.0);
        adj.addi_cas.assign(n, 0.0);
    }

    // Che inputs exclude the application node.
    std::vector<double> pres(n - 1), rate(n - 1), tlb_pres(n - 1), tlb_rate(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const auto& e = table.entries[i];
        const double combined = e.a_read + adj.addi_read[i];
        rate[i - 1] = combined;
        pres[i - 1] = combined > 0.0 ? e.presence * e.a_read / combined : 0.0;
        tlb_pres[i - 1] = e.presence;
        tlb_rate[i - 1] = e.a_read;
    }
    for (const auto& lvl : platform.data_cache_levels) prof.dcache_char.push_back(char_time(pres, rate, lvl.capacity));
    const double pages = static_cast<double>(s.pages);
    for (const auto& lvl : platform.tlb_levels) {
        prof.tlb_char.push_back(tlb_char_time(tlb_pres, tlb_rate, pages, lvl.capacity));
    }
    const auto z = tlb_page_rates(tlb_pres, tlb_rate, pages);

    prof.b.assign(n, 0.0);
    prof.c.assign(n, 0.0);
    prof.e_cas.assign(n, 0.0);
    prof.e_stall_coeff.assign(n, 0.0);
    prof.e_rec.assign(n, 0.0);
    prof.p_coh.assign(n, 0.0);
    prof.e_cache.assign(n, 0.0);
    prof.e_tlb.assign(n, 0.0);
    prof.dcache_hit.assign(n * nd, 1.0);
    prof.tlb_hit.assign(n * nt, 1.0);

    prof.c[0] = platform.t_app;
    for (std::size_t i = 1; i < n; ++i) {
        const auto& e = table.entries[i];
        const double ar = e.a_read + adj.addi_read[i];
        const double ac = e.a_cas + adj.addi_cas[i];
        const double events = e.a_read + e.a_cas;
        prof.e_cas[i] = events > 0.0 ? cas_execute(e.a_read, e.a_cas, prof.t_cas) : 0.0;
        prof.e_stall_coeff[i] = stall_coeff(ac, P, prof.t_cas);
        prof.p_coh[i] = recovery_prob(ar, ac, P);
        prof.e_rec[i] = prof.p_coh[i] * prof.t_rec;

        double prev = 0.0, cache = 0.0;
        for (std::size_t l = 0; l < nd; ++l) {
            const double h = std::max(prev, che_hit(rate[i - 1], prof.dcache_char[l]));
            prof.dcache_hit[i * nd + l] = h;
            cache += (h - prev) * platform.data_cache_levels[l].hit_latency;
            prev = h;
        }
        cache += (1.0 - prev) * platform.memory_latency;
        prof.e_cache[i] = (1.0 - prof.p_coh[i]) * cache;

        prev = 0.0;
        double tlb = 0.0;
        for (std::size_t l = 0; l < nt; ++l) {
            const double g = std::max(prev, che_hit(z[i - 1], prof.tlb_char[l]));
            prof.tlb_hit[i * nt + l] = g;
            tlb += (g - prev) * platform.tlb_levels[l].hit_latency;
            prev = g;
        }
        tlb += (1.0 - prev) * platform.page_walk_latency;
        prof.e_tlb[i] = tlb;

        prof.b[i] = prof.e_stall_coeff[i];
        prof.c[i] = platform.t_cmp + prof.e_cas[i] + prof.e_rec[i] + prof.e_cache[i] + prof.e_tlb[i];
    }
    return prof;
}

}  // namespace lfperf
