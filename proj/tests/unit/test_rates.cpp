#include <doctest.h>

#include <random>

#include "lfperf/config.hpp"
#include "lfperf/rates.hpp"
#include "oracles.hpp"

using namespace lfperf;

namespace {
std::vector<double> random_presence(int R, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.05, 0.95);
    std::vector<double> p(R + 2, 1.0);
    for (int k = 1; k <= R; ++k) p[k] = U(rng);
    return p;
}
}  // namespace

TEST_CASE("linked list probabilities match subset enumeration") {
    std::mt19937_64 rng(3);
    for (int R = 1; R <= 7; ++R) {
        const auto p = random_presence(R, rng);
        const auto ref = oracle::enumerate_list(p);
        for (int t = 1; t <= R; ++t) {
            for (int k = 0; k <= R + 1; ++k) {
                CHECK(ll_read_prob(t, k, p) == doctest::Approx(ref.read[t][k]).epsilon(1e-12));
                CHECK(ll_cas_prob(t, k, OpKind::Insert, p) == doctest::Approx(ref.cas_ins[t][k]).epsilon(1e-12));
                CHECK(ll_cas_prob(t, k, OpKind::Delete, p) == doctest::Approx(ref.cas_del[t][k]).epsilon(1e-12));
                CHECK(ll_cas_prob(t, k, OpKind::Search, p) == 0.0);
            }
        }
    }
}

TEST_CASE("hash table locates keys in consecutive buckets") {
    CHECK(ht_locate(1, 4) == std::pair<std::int64_t, Key>{1, 1});
    CHECK(ht_locate(4, 4) == std::pair<std::int64_t, Key>{1, 4});
    CHECK(ht_locate(5, 4) == std::pair<std::int64_t, Key>{2, 1});
    CHECK(bucket_count(10, 4) == 3);
    const std::vector<double> p(6, 1.0);
    CHECK(ht_prob(1, 2, 2, 1, EventKind::Read, OpKind::Search, p) == 0.0);
    CHECK(ht_prob(2, 2, 2, 1, EventKind::Read, OpKind::Search, p) == 1.0);
}

TEST_CASE("skip list probabilities match enumeration over heights") {
    std::mt19937_64 rng(5);
    for (int R = 1; R <= 4; ++R) {
        const int hmax = 2;
        const auto p = random_presence(R, rng);
        const auto ref = oracle::enumerate_skiplist(p, hmax);
        const SkipListModel m(p, hmax);
        for (int t = 1; t <= R; ++t) {
            for (int k = 0; k <= R; ++k) {
                for (int h = 0; h <= hmax; ++h) {
                    if (k == 0 && h != hmax) continue;
                    CAPTURE(R);
                    CAPTURE(t);
                    CAPTURE(k);
                    CAPTURE(h);
                    CHECK(m.read_prob(NodeKind::SlData, k, h, t) == doctest::Approx(ref.read[t][k][h]).epsilon(1e-12));
                    CHECK(m.cas_prob(NodeKind::SlData, k, h, t, OpKind::Insert) ==
                          doctest::Approx(ref.data_ins[t][k][h]).epsilon(1e-12));
                    CHECK(m.cas_prob(NodeKind::SlData, k, h, t, OpKind::Delete) ==
                          doctest::Approx(ref.data_del[t][k][h]).epsilon(1e-12));
                    if (h >= 1) {
                        CHECK(m.read_prob(NodeKind::SlRouting, k, h, t) == doctest::Approx(ref.read[t][k][h]).epsilon(1e-12));
                        CHECK(m.cas_prob(NodeKind::SlRouting, k, h, t, OpKind::Insert) ==
                              doctest::Approx(ref.rout_ins[t][k][h]).epsilon(1e-12));
                        CHECK(m.cas_prob(NodeKind::SlRouting, k, h, t, OpKind::Delete) ==
                              doctest::Approx(ref.rout_del[t][k][h]).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("skip list height presence sums to key presence") {
    for (int hmax : {1, 5, 11}) {
        double s = 0.0;
        for (int h = 0; h <= hmax; ++h) s += sl_presence(h, 0.7, hmax);
        CHECK(s == doctest::Approx(0.7).epsilon(1e-14));
    }
    CHECK_THROWS(sl_presence(4, 0.5, 3));
}

TEST_CASE("skip list heights in the simulator follow the coin-flip pmf") {
    // empirical heights from repeated fair coin flips, capped at hmax
    std::mt19937_64 rng(11);
    const int hmax = 6;
    const auto pmf = sl_height_pmf(hmax);
    std::vector<int> count(hmax + 1, 0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        int h = 0;
        while (h < hmax && (rng() & 1)) ++h;
        ++count[h];
    }
    for (int h = 0; h <= hmax; ++h) CHECK(count[h] / double(n) == doctest::Approx(pmf[h]).epsilon(0.05));
}

TEST_CASE("bst traversal probability matches random permutations") {
    const int R = 16;
    const int perms = 20000;
    std::mt19937_64 rng(16);
    std::vector<std::vector<int>> hits(R + 1, std::vector<int>(R + 1, 0));
    for (int n = 0; n < perms; ++n) {
        const oracle::Bst t(oracle::random_order(R, rng));
        for (int target = 1; target <= R; ++target) {
            for (int k : t.path(target)) ++hits[target][k];
        }
    }
    const std::vector<double> p(R + 2, 1.0);
    for (int target = 1; target <= R; ++target) {
        for (int k = 1; k <= R; ++k) {
            const double q = bst_read_internal(target, k, p);
            const double sd = std::sqrt(q * (1 - q) / perms);
            CHECK(std::fabs(hits[target][k] / double(perms) - q) <= 4 * sd + 1e-12);
        }
    }
}

TEST_CASE("bst subtree sizes stay inside the proof bounds") {
    const int N = 32, perms = 40000;
    std::mt19937_64 rng(32);
    std::vector<std::vector<int>> count(N + 1, std::vector<int>(N + 1, 0));
    for (int n = 0; n < perms; ++n) {
        const auto size = oracle::Bst(oracle::random_order(N, rng)).subtree_sizes();
        for (int k = 1; k <= N; ++k) ++count[k][size[k]];
    }
    for (int k : {1, 5, 16, 30, 32}) {
        for (int s = 2; s <= N; ++s) {
            const auto b = oracle::subtree_pmf_bounds(N, k, s);
            const double f = count[k][s] / double(perms);
            const double sd = std::sqrt(std::max(b.hi, 1e-6) / perms);
            CHECK(f >= b.lo - 4 * sd);
            CHECK(f <= b.hi + 4 * sd);
        }
    }
}

TEST_CASE("bst virtual decomposition conserves presence and rates") {
    for (int n : {2, 3, 8}) {
        for (bool zipf : {false, true}) {
            const auto v = bst_virtual_decompose(n, 0.8, 0.3, 0.02, zipf);
            double p = 0, r = 0, c = 0;
            for (const auto& s : v) {
                p += s.presence;
                r += s.presence * s.a_read;
                c += s.presence * s.a_cas;
            }
            CHECK(p == doctest::Approx(0.8));
            CHECK(r == doctest::Approx(0.8 * 0.3));
            CHECK(c == doctest::Approx(0.8 * 0.02));
        }
    }
    CHECK_THROWS(bst_virtual_decompose(1, 1.0, 1.0, 0.0, false));
}

TEST_CASE("rate tables for every structure are well formed") {
    const PlatformSpec plat = load_platform(LFPERF_SOURCE_DIR "/configs/platform-synthetic.cfg");
    for (auto kind : {StructureKind::LinkedList, StructureKind::HashTable, StructureKind::SkipList, StructureKind::ExternalBst}) {
        WorkloadSpec ws;
        ws.key_range = 64;
        ws.op_mix = BalancedMix{0.2};
        ws.threads = 2;
        StructureSpec ss;
        ss.kind = kind;
        ss.load_factor = 4;
        const Workload w(ws);
        const auto t = build_rate_table(w, resolve(ss, w, plat));
        REQUIRE(!t.entries.empty());
        CHECK(t.entries[0].id.kind == NodeKind::App);
        CHECK(t.entries[0].a_read == 1.0);
        for (const auto& e : t.entries) {
            CHECK(e.presence >= 0.0);
            CHECK(e.presence <= 1.0);
            CHECK(e.a_read >= 0.0);
            CHECK(e.a_cas >= 0.0);
        }
        CHECK(t.events_per_op() > 1.0);
    }
}

TEST_CASE("linked list search-only rates are closed form") {
    // uniform search over a full list: node k is read by every target >= k
    const PlatformSpec plat = load_platform(LFPERF_SOURCE_DIR "/configs/platform-synthetic.cfg");
    WorkloadSpec ws;
    ws.key_range = 10;
    ws.threads = 2;
    const Workload w(ws);
    const auto t = build_rate_table(w, resolve(StructureSpec{}, w, plat));
    for (const auto& e : t.entries) {
        if (e.id.kind != NodeKind::Node) continue;
        CHECK(e.a_read * 2 == doctest::Approx((11.0 - static_cast<double>(e.id.key)) / 10.0));
        CHECK(e.a_cas == 0.0);
    }
}
