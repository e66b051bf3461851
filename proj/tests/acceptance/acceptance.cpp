// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Usage: lfperf_acceptance [--only name]

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lfperf/config.hpp"
#include "lfperf/latency.hpp"
#include "lfperf/model.hpp"
#include "lfperf/rates.hpp"
#include "lfperf/sim/simulator.hpp"
#include "lfperf/sim/stats.hpp"
#include "oracles.hpp"

using namespace lfperf;

namespace {

// ---- pinned tolerances ----
constexpr double kCheRmse = 0.02;
constexpr double kCheAggregate = 0.01;
constexpr double kInvariance = 1e-9;
constexpr double kExact = 1e-12;
constexpr double kSigmas = 3.0;
constexpr double kSolverResidual = 1e-12;
constexpr double kOccupancy = 1e-9;
constexpr double kEndToEnd = 0.10;
constexpr double kEndToEndShare = 0.90;
constexpr double kKsP = 0.01;
constexpr int kKsPassing = 7;

PlatformSpec platform() { return load_platform(LFPERF_SOURCE_DIR "/configs/platform-synthetic.cfg"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- Che vs exact LRU ------------------------------------------------------------------

Outcome che_vs_lru() {
    const std::size_t N = 4096;
    const std::size_t refs = 10'000'000;
    double worst_rmse = 0.0, worst_agg = 0.0;
    std::string parts;
    for (int zipf = 0; zipf < 2; ++zipf) {
        std::vector<double> pop(N);
        for (std::size_t i = 0; i < N; ++i) pop[i] = zipf ? std::pow(static_cast<double>(i + 1), -1.1) : 1.0;
        double tot = 0.0;
        for (double v : pop) tot += v;
        for (double& v : pop) v /= tot;
        std::discrete_distribution<std::uint32_t> draw(pop.begin(), pop.end());
        for (std::size_t C : {256u, 1024u}) {
            std::mt19937_64 rng(1000 + C + zipf);
            oracle::Lru lru(N, C);
            std::vector<std::uint64_t> hits(N, 0), seen(N, 0);
            // warm the cache before counting
            for (std::size_t i = 0; i < 10 * C; ++i) lru.access(draw(rng));
            for (std::size_t i = 0; i < refs; ++i) {
                const auto id = draw(rng);
                ++seen[id];
                if (lru.access(id)) ++hits[id];
            }
            const std::vector<double> presence(N, 1.0);
            const CharTime ct = char_time(presence, pop, static_cast<double>(C));
            double se = 0.0, agg_sim = 0.0, agg_che = 0.0;
            std::size_t counted = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double h = che_hit(pop[i], ct);
                agg_che += pop[i] * h;
                if (seen[i] == 0) continue;
                const double e = static_cast<double>(hits[i]) / static_cast<double>(seen[i]);
                se += (e - h) * (e - h);
                ++counted;
            }
            for (std::size_t i = 0; i < N; ++i) agg_sim += static_cast<double>(hits[i]);
            agg_sim /= static_cast<double>(refs);
            const double rmse = std::sqrt(se / static_cast<double>(counted));
            worst_rmse = std::max(worst_rmse, rmse);
            worst_agg = std::max(worst_agg, std::fabs(agg_sim - agg_che));
            parts += fmt(" %s/C=%zu rmse=%.4f agg=%.4f/%.4f;", zipf ? "zipf" : "unif", C, rmse, agg_che, agg_sim);
        }
    }
    return {worst_rmse <= kCheRmse && worst_agg <= kCheAggregate,
            fmt("worst rmse %.4f (<= %.2f), worst |agg| %.4f (<= %.2f);", worst_rmse, kCheRmse, worst_agg,
                kCheAggregate) + parts};
}

// ---- rate scaling invariance -----------------------------------------------------------

double rel(double a, double b) {
    const double d = std::fabs(a - b);
    const double s = std::max(std::fabs(a), std::fabs(b));
    return s == 0.0 ? 0.0 : d / s;
}

Outcome rate_invariance() {
    const PlatformSpec plat = platform();
    double worst = 0.0;
    std::size_t checked = 0;
    struct Case {
        StructureKind kind;
        Key R;
        double u;
        int P;
        bool zipf;
    };
    const std::vector<Case> cases = {{StructureKind::HashTable, 4096, 0.2, 8, false},
                                     {StructureKind::SkipList, 1024, 0.5, 4, true},
                                     {StructureKind::LinkedList, 256, 0.1, 2, false}};
    for (const auto& c : cases) {
        WorkloadSpec ws;
        ws.key_range = c.R;
        ws.op_mix = BalancedMix{c.u};
        ws.threads = c.P;
        if (c.zipf) ws.key_distribution = ZipfKeys{1.1};
        StructureSpec ss;
        ss.kind = c.kind;
        ss.load_factor = 2;
        const Workload w(ws);
        const ResolvedStructure rs = resolve(ss, w, plat);
        const RateTable base = build_rate_table(w, rs);
        const LatencyProfile p0 = build_latency_profile(base, rs, plat);
        for (double kappa : {0.1, 10.0}) {
            RateTable scaled = base;
            for (std::size_t i = 1; i < scaled.entries.size(); ++i) {
                scaled.entries[i].a_read *= kappa;
                scaled.entries[i].a_cas *= kappa;
            }
            const LatencyProfile p1 = build_latency_profile(scaled, rs, plat);
            for (std::size_t i = 0; i < p0.dcache_hit.size(); ++i) worst = std::max(worst, rel(p0.dcache_hit[i], p1.dcache_hit[i]));
            for (std::size_t i = 0; i < p0.tlb_hit.size(); ++i) worst = std::max(worst, rel(p0.tlb_hit[i], p1.tlb_hit[i]));
            for (std::size_t i = 1; i < base.entries.size(); ++i) {
                const auto& e0 = base.entries[i];
                const auto& e1 = scaled.entries[i];
                if (e0.a_all() <= 0.0) continue;
                worst = std::max(worst, rel(recovery_prob(e0.a_read, e0.a_cas, c.P), recovery_prob(e1.a_read, e1.a_cas, c.P)));
                worst = std::max(worst, rel(cas_execute(e0.a_read, e0.a_cas, p0.t_cas), cas_execute(e1.a_read, e1.a_cas, p0.t_cas)));
                worst = std::max(worst, rel(p0.e_rec[i], p1.e_rec[i]));
                worst = std::max(worst, rel(p0.e_cas[i], p1.e_cas[i]));
                ++checked;
            }
        }
    }
    return {worst < kInvariance, fmt("max relative change %.3g over %zu node checks (< %.0e)", worst, checked, kInvariance)};
}

// ---- LL / HT against subset enumeration ------------------------------------------------

Outcome list_exactness() {
    double worst = 0.0;
    std::size_t checks = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(0.02, 0.98);
        const int R = 1 + seed % 10;
        std::vector<double> p(R + 2, 1.0);
        for (int k = 1; k <= R; ++k) p[k] = U(rng);

        const auto ref = oracle::enumerate_list(p);
        for (int t = 1; t <= R; ++t) {
            for (int k = 0; k <= R + 1; ++k) {
                worst = std::max(worst, std::fabs(ll_read_prob(t, k, p) - ref.read[t][k]));
                worst = std::max(worst, std::fabs(ll_cas_prob(t, k, OpKind::Insert, p) - ref.cas_ins[t][k]));
                worst = std::max(worst, std::fabs(ll_cas_prob(t, k, OpKind::Delete, p) - ref.cas_del[t][k]));
                checks += 3;
            }
        }

        // Hash table: keys split into buckets of lf consecutive keys, each a list.
        const int lf = 1 + seed % 4;
        const int buckets = (R + lf - 1) / lf;
        for (int b = 0; b < buckets; ++b) {
            const int first = b * lf + 1, last = std::min(R, first + lf - 1);
            const int n = last - first + 1;
            std::vector<double> bp(n + 2, 1.0);
            for (int i = 0; i < n; ++i) bp[i + 1] = p[first + i];
            const auto bref = oracle::enumerate_list(bp);
            for (int t = 1; t <= R; ++t) {
                const auto [tb, ts] = ht_locate(t, lf);
                for (int slot = 0; slot <= n + 1; ++slot) {
                    const bool same = tb == b + 1;
                    const double r = same ? bref.read[ts][slot] : 0.0;
                    const double ci = same ? bref.cas_ins[ts][slot] : 0.0;
                    const double cd = same ? bref.cas_del[ts][slot] : 0.0;
                    worst = std::max(worst, std::fabs(ht_prob(tb, ts, b + 1, slot, EventKind::Read, OpKind::Search, bp) - r));
                    worst = std::max(worst, std::fabs(ht_prob(tb, ts, b + 1, slot, EventKind::Cas, OpKind::Insert, bp) - ci));
                    worst = std::max(worst, std::fabs(ht_prob(tb, ts, b + 1, slot, EventKind::Cas, OpKind::Delete, bp) - cd));
                    checks += 3;
                }
            }
        }
    }
    return {worst <= kExact, fmt("max |model - enumeration| %.3g over %zu probabilities, 100 seeds (<= %.0e)", worst, checks, kExact)};
}

// ---- BST traversal probability -----------------------------------------------------------

Outcome lemma1() {
    const int R = 64;
    const int perms = 100'000;
    std::mt19937_64 rng(64);
    // sampled (node, target) pairs, plus the diagonal
    std::vector<std::pair<int, int>> pairs;
    std::uniform_int_distribution<int> key(1, R);
    for (int i = 0; i < 32; ++i) pairs.push_back({key(rng), key(rng)});
    for (int k : {1, 32, 64}) pairs.push_back({k, k});
    std::vector<std::uint64_t> hits(pairs.size(), 0);
    for (int n = 0; n < perms; ++n) {
        const oracle::Bst t(oracle::random_order(R, rng));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto path = t.path(pairs[i].second);
            if (std::find(path.begin(), path.end(), pairs[i].first) != path.end()) ++hits[i];
        }
    }
    const std::vector<double> full(R + 2, 1.0);
    int bad = 0;
    double worst_z = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double p = bst_read_internal(pairs[i].second, pairs[i].first, full);
        const double f = static_cast<double>(hits[i]) / perms;
        const double sd = std::sqrt(p * (1 - p) / perms);
        const double z = sd > 0 ? std::fabs(f - p) / sd : (f == p ? 0.0 : 1e9);
        worst_z = std::max(worst_z, z);
        if (z > kSigmas) ++bad;
    }
    return {bad == 0, fmt("%zu (node, target) pairs over %d permutations, worst |z| %.2f (<= %.0f), %d outside", pairs.size(), perms, worst_z, kSigmas, bad)};
}

// ---- BST subtree-size pmf -----------------------------------------------------------------

Outcome theorem2() {
    const int N = 128;
    const int perms = 100'000;
    const std::vector<int> ranks = {1, 8, 40, 64, 100, 121, 128};
    std::map<int, std::vector<std::uint64_t>> count;
    for (int k : ranks) count[k].assign(N + 1, 0);
    std::mt19937_64 rng(128);
    for (int n = 0; n < perms; ++n) {
        const oracle::Bst t(oracle::random_order(N, rng));
        const auto size = t.subtree_sizes();
        for (int k : ranks) ++count[k][size[k]];
    }
    int bad = 0, checks = 0;
    double worst_z = 0.0;
    auto check = [&](double f, oracle::Interval b) {
        ++checks;
        const double lo_sd = std::sqrt(std::max(b.lo * (1 - b.lo), 1e-300) / perms);
        const double hi_sd = std::sqrt(std::max(b.hi * (1 - b.hi), 1e-300) / perms);
        double z = 0.0;
        if (f < b.lo) z = (b.lo - f) / lo_sd;
        if (f > b.hi) z = (f - b.hi) / hi_sd;
        worst_z = std::max(worst_z, z);
        if (z > kSigmas) ++bad;
    };
    for (int k : ranks) {
        check(static_cast<double>(count[k][N]) / perms, {1.0 / N, 1.0 / N});
        for (int s = 2; s <= 32; ++s) check(static_cast<double>(count[k][s]) / perms, oracle::subtree_pmf_bounds(N, k, s));
    }
    return {bad == 0, fmt("%d pmf checks (ranks 1..128, s = N and s in [2,32]) over %d permutations; worst excess %.2f sd (<= %.0f), %d outside",
                          checks, perms, worst_z, kSigmas, bad)};
}

// ---- solver --------------------------------------------------------------------------------

Outcome solver() {
    const PlatformSpec plat = platform();
    double worst_res = 0.0, worst_occ = 0.0;
    bool a0_exact = true;
    int cases = 0;
    for (auto kind : {StructureKind::LinkedList, StructureKind::HashTable, StructureKind::SkipList}) {
        for (double u : {0.0, 0.1, 0.5}) {
            for (int P : {1, 3, 8, 16}) {
                WorkloadSpec ws;
                ws.key_range = 512;
                ws.op_mix = BalancedMix{u};
                ws.threads = P;
                StructureSpec ss;
                ss.kind = kind;
                ss.load_factor = 2;
                const Prediction pr = predict(Workload(ws), ss, plat);
                const auto& s = pr.solution;
                worst_res = std::max(worst_res, std::fabs(s.residual()) / P);
                double occ = 0.0;
                for (double t : s.occupancy) occ += t;
                worst_occ = std::max(worst_occ, std::fabs(occ - P) / P);
                if (s.A == 0.0 && s.T != P / s.Bq) a0_exact = false;
                ++cases;
            }
        }
    }
    // A = 0 by construction: search-only, several thread counts.
    int a0_cases = 0;
    for (int P : {1, 2, 7}) {
        WorkloadSpec ws;
        ws.key_range = 300;
        ws.threads = P;
        const Prediction pr = predict(Workload(ws), StructureSpec{}, plat);
        if (pr.solution.A != 0.0 || pr.solution.T != P / pr.solution.Bq) a0_exact = false;
        ++a0_cases;
    }
    return {worst_res <= kSolverResidual && worst_occ <= kOccupancy && a0_exact,
            fmt("%d solves: worst |A T^2 + Bq T - P|/P %.2g (<= %.0e), worst |sum t_i - P|/P %.2g (<= %.0e), A=0 closed form %s on %d search-only cases",
                cases, worst_res, kSolverResidual, worst_occ, kOccupancy, a0_exact ? "exact" : "NOT exact", a0_cases)};
}

// ---- end to end ----------------------------------------------------------------------------

struct GridPoint {
    std::string label;
    double predicted = 0.0, simulated = 0.0;
};

double sim_mean(const WorkloadSpec& ws, const StructureSpec& ss, const PlatformSpec& plat, int seeds, std::size_t ops,
                std::vector<double>* hits = nullptr) {
    double sum = 0.0;
    if (hits) hits->assign(plat.data_cache_levels.size(), 0.0);
    for (int s = 0; s < seeds; ++s) {
        sim::SimConfig c;
        c.workload = ws;
        c.structure = ss;
        c.platform = plat;
        c.seed = 1 + static_cast<std::uint64_t>(s);
        c.ops_per_thread = ops;
        c.warmup_ops_per_thread = ops;
        const auto rep = sim::simulate_full(c);
        sum += rep.throughput;
        if (hits) {
            for (std::size_t l = 0; l < hits->size(); ++l) (*hits)[l] += rep.dcache_hit_ratio[l] / seeds;
        }
    }
    return sum / seeds;
}

Outcome end_to_end() {
    const PlatformSpec plat = platform();
    struct S {
        StructureKind kind;
        Key R;
    };
    const std::vector<S> structs = {{StructureKind::LinkedList, 512},
                                    {StructureKind::HashTable, 4096},
                                    {StructureKind::SkipList, 2048},
                                    {StructureKind::ExternalBst, 2048}};
    const int seeds = 3;
    const std::size_t ops = 10000;
    int ok = 0, total = 0;
    std::string misses;
    for (const auto& st : structs) {
        for (double u : {0.0, 0.1, 0.2, 0.5}) {
            for (int P : {1, 2, 4, 8}) {
                WorkloadSpec ws;
                ws.key_range = st.R;
                ws.op_mix = BalancedMix{u};
                ws.threads = P;
                StructureSpec ss;
                ss.kind = st.kind;
                ss.load_factor = 2;
                const double pred = predict(Workload(ws), ss, plat).solution.T;
                const double simT = sim_mean(ws, ss, plat, seeds, ops);
                const double err = (pred - simT) / simT;
                std::printf("    %-3s R=%-4lld u=%.1f P=%d  predicted %.6f  simulated %.6f  err %+.3f\n", to_string(st.kind),
                            static_cast<long long>(st.R), u, P, pred, simT, err);
                std::fflush(stdout);
                ++total;
                if (std::fabs(err) <= kEndToEnd) {
                    ++ok;
                } else {
                    misses += fmt(" %s/u=%.1f/P=%d(%+.3f)", to_string(st.kind), u, P, err);
                }
            }
        }
    }
    const double share = static_cast<double>(ok) / total;
    return {share >= kEndToEndShare, fmt("%d/%d points within %.0f%% (%.1f%%, need >= %.0f%%); seeds/point %d, ops/thread %zu; outside:%s",
                                         ok, total, kEndToEnd * 100, share * 100, kEndToEndShare * 100, seeds, ops,
                                         misses.empty() ? " none" : misses.c_str())};
}

// ---- packing -------------------------------------------------------------------------------

Outcome packing() {
    const PlatformSpec plat = platform();
    const int seeds = 3;
    const std::size_t ops = 10000;
    int sign_ok = 0, hit_ok = 0, total = 0;
    std::string notes;
    for (double u : {0.0, 0.2}) {
        for (int P : {1, 2, 4, 8}) {
            WorkloadSpec ws;
            ws.key_range = 4096;
            ws.op_mix = BalancedMix{u};
            ws.threads = P;
            StructureSpec pad;
            pad.kind = StructureKind::HashTable;
            pad.load_factor = 2;
            StructureSpec pack = pad;
            pack.layout = Layout::Packed;
            const Workload w(ws);
            const Prediction m0 = predict(w, pad, plat), m1 = predict(w, pack, plat);
            std::vector<double> h0, h1;
            const double s0 = sim_mean(ws, pad, plat, seeds, ops, &h0);
            const double s1 = sim_mean(ws, pack, plat, seeds, ops, &h1);
            const double dm = m1.solution.T - m0.solution.T, ds = s1 - s0;
            const bool sign = (dm > 0) == (ds > 0);
            // model aggregate hit ratio per level, event-weighted
            auto model_hits = [&](const Prediction& pr) {
                std::vector<double> h(plat.data_cache_levels.size(), 0.0);
                double wsum = 0.0;
                for (std::size_t i = 1; i < pr.rates.entries.size(); ++i) {
                    const double wi = occupancy_weight(pr.rates, i);
                    wsum += wi;
                    for (std::size_t l = 0; l < h.size(); ++l) h[l] += wi * pr.profile.hit(i, l);
                }
                for (double& x : h) x /= wsum;
                return h;
            };
            const auto mh0 = model_hits(m0), mh1 = model_hits(m1);
            bool hits = true;
            for (std::size_t l = 0; l < h0.size(); ++l) {
                if (mh1[l] < mh0[l] || h1[l] < h0[l]) hits = false;
            }
            std::printf("    u=%.1f P=%d  model %+.3f%%  sim %+.3f%%  L1 hit model %.3f->%.3f sim %.3f->%.3f\n", u, P,
                        100 * dm / m0.solution.T, 100 * ds / s0, mh0[0], mh1[0], h0[0], h1[0]);
            std::fflush(stdout);
            sign_ok += sign;
            hit_ok += hits;
            ++total;
            if (!sign) notes += fmt(" sign u=%.1f/P=%d", u, P);
            if (!hits) notes += fmt(" hits u=%.1f/P=%d", u, P);
        }
    }
    return {sign_ok == total && hit_ok == total,
            fmt("sign agreement %d/%d, packed hit ratios >= padded %d/%d (model and sim, every level)%s", sign_ok, total,
                hit_ok, total, notes.c_str())};
}

// ---- Poisson -------------------------------------------------------------------------------

// Rare key: its valued node has height 0 in the realized structure, so only
// searches ending nearby read it. Keys are drawn in a fixed random order and
// the first eight rare ones are gated; the selection never looks at gaps.
struct PoissonRun {
    int rare_pass = 0, rare = 0, all_pass = 0, all = 0;
    std::size_t rare_min_n = ~std::size_t{0};
    std::string rare_keys, other_keys;
};

PoissonRun poisson_run(double u, std::size_t ops) {
    WorkloadSpec ws;
    ws.key_range = 1024;
    ws.op_mix = BalancedMix{u};
    ws.threads = 4;
    sim::SimConfig c;
    c.workload = ws;
    c.structure.kind = StructureKind::SkipList;
    c.platform = platform();
    c.ops_per_thread = ops;
    c.warmup_ops_per_thread = 10000;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<Key> key(1, ws.key_range);
    while (c.tracked_keys.size() < 32) {
        const Key k = key(rng);
        if (std::find(c.tracked_keys.begin(), c.tracked_keys.end(), k) == c.tracked_keys.end()) c.tracked_keys.push_back(k);
    }
    const auto rep = sim::simulate_full(c);
    std::map<Key, int> height;
    for (const auto& n : rep.nodes) {
        if (n.id.kind == NodeKind::SlData && n.events > 0) height[n.id.key] = std::max(height[n.id.key], n.id.height);
    }
    PoissonRun out;
    for (Key k : c.tracked_keys) {
        const auto it = rep.interarrival.find(k);
        if (it == rep.interarrival.end()) continue;
        const auto ks = sim::ks_exponential(it->second);
        const bool ok = ks.p_value > kKsP;
        ++out.all;
        out.all_pass += ok;
        const auto h = height.find(k);
        if (out.rare < 8 && h != height.end() && h->second == 0) {
            ++out.rare;
            out.rare_pass += ok;
            out.rare_min_n = std::min(out.rare_min_n, ks.n);
            out.rare_keys += fmt(" %lld:n=%zu,p=%.3g", static_cast<long long>(k), ks.n, ks.p_value);
        } else if (h != height.end()) {
            out.other_keys += fmt(" %lld(h%d):n=%zu,p=%.3g", static_cast<long long>(k), h->second, ks.n, ks.p_value);
        }
    }
    return out;
}

Outcome poisson() {
    const std::size_t ops = 500000;
    const PoissonRun s = poisson_run(0.0, ops);
    const PoissonRun m = poisson_run(0.5, ops / 4);
    const bool pass = s.rare == 8 && s.rare_min_n >= 1000 && s.rare_pass >= kKsPassing;
    std::string d = fmt("search-only, R=1024, P=4, rare keys: %d/%d with KS p > %.2f (need >= %d of 8), min samples %zu (need >= 1000);",
                        s.rare_pass, s.rare, kKsP, kKsPassing, s.rare_min_n);
    d += s.rare_keys;
    d += fmt(" | not gated: all 32 drawn keys %d/%d pass, taller nodes:%s", s.all_pass, s.all, s.other_keys.c_str());
    d += fmt(" | not gated, 50/50 mix: rare %d/%d, all %d/%d", m.rare_pass, m.rare, m.all_pass, m.all);
    return {pass, d};
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = argv[++i];
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"che-vs-lru", che_vs_lru},
        {"rate-scaling-invariance", rate_invariance},
        {"ll-ht-exactness", list_exactness},
        {"bst-traversal-lemma", lemma1},
        {"bst-subtree-pmf", theorem2},
        {"solver", solver},
        {"end-to-end-grid", end_to_end},
        {"packing", packing},
        {"poisson-validity", poisson},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && only != name) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    if (only.empty()) {
        std::printf("MANUAL hardware-throughput: not run here; calibrate a 2-socket x86 machine and compare `lfperf bench` "
                    "against `lfperf predict` for hash-table uniform scenarios (target: within 30%%), see README\n");
    }
    return failed ? 1 : 0;
}
