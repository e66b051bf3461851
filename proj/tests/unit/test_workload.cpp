#include <doctest.h>

#include <cmath>

#include "lfperf/config.hpp"
#include "lfperf/workload.hpp"

using namespace lfperf;

TEST_CASE("uniform and zipf key pmf sum to one") {
    WorkloadSpec s;
    s.key_range = 1000;
    for (bool zipf : {false, true}) {
        if (zipf) s.key_distribution = ZipfKeys{1.1};
        const Workload w(s);
        double sum = 0.0;
        for (Key k = 1; k <= 1000; ++k) sum += w.key_prob(k);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        if (zipf) CHECK(w.key_prob(1) / w.key_prob(2) == doctest::Approx(std::pow(2.0, 1.1)));
    }
}

TEST_CASE("balanced mix splits updates evenly and sets presence") {
    WorkloadSpec s;
    s.key_range = 10;
    s.op_mix = BalancedMix{0.2};
    const Workload w(s);
    CHECK(w.op_prob(OpKind::Insert, 3) == doctest::Approx(0.1 * 0.1));
    CHECK(w.op_prob(OpKind::Search, 3) == doctest::Approx(0.1 * 0.8));
    CHECK(w.p_last_insert(3) == doctest::Approx(0.5));
    CHECK_FALSE(w.search_only());
    CHECK(w.with_update_fraction(0.0).search_only());
    CHECK(w.with_update_fraction(0.0).p_last_insert(3) == 1.0);
}

TEST_CASE("per-key override and asymmetric mix") {
    WorkloadSpec s;
    s.key_range = 4;
    s.op_mix = AsymmetricMix{0.3, 0.1, 0.6};
    s.per_key_override[2] = OpTriple{0.0, 0.0, 1.0};
    const Workload w(s);
    CHECK(w.p_last_insert(1) == doctest::Approx(0.75));
    CHECK(w.p_last_insert(2) == 1.0);
    CHECK(w.mix_for(2).src == 1.0);
}

TEST_CASE("invalid workloads are rejected") {
    WorkloadSpec s;
    s.key_range = 0;
    CHECK_THROWS(Workload{s});
    s.key_range = 10;
    s.op_mix = AsymmetricMix{0.5, 0.5, 0.5};
    CHECK_THROWS(Workload{s});
    s.op_mix = BalancedMix{};
    s.threads = 0;
    CHECK_THROWS(Workload{s});
}

TEST_CASE("thread placement fills the first socket") {
    PlatformSpec p = load_platform(LFPERF_SOURCE_DIR "/configs/platform-synthetic.cfg");
    CHECK(threads_on_first_socket(p, 4) == 4);
    CHECK(active_sockets(p, 8) == 1);
    CHECK(active_sockets(p, 9) == 2);
    CHECK(socket_of_thread(p, 8) == 1);
    CHECK(effective_t_cas(p, 8) == p.t_cas_by_sockets.at(1));
    CHECK(effective_t_cas(p, 9) == p.t_cas_by_sockets.at(2));
}

TEST_CASE("platform config round-trips") {
    const PlatformSpec p = load_platform(LFPERF_SOURCE_DIR "/configs/platform-synthetic.cfg");
    const PlatformSpec q = platform_from_config(parse_flat_config(platform_to_config(p)));
    REQUIRE(q.data_cache_levels.size() == p.data_cache_levels.size());
    for (std::size_t i = 0; i < p.data_cache_levels.size(); ++i) {
        CHECK(q.data_cache_levels[i].capacity == p.data_cache_levels[i].capacity);
        CHECK(q.data_cache_levels[i].hit_latency == p.data_cache_levels[i].hit_latency);
    }
    CHECK(q.tlb_levels.size() == p.tlb_levels.size());
    CHECK(q.t_cas_by_sockets == p.t_cas_by_sockets);
    CHECK(q.memory_latency == p.memory_latency);
    CHECK(q.t_rec_high == p.t_rec_high);
    CHECK(q.total_cores() == p.total_cores());
}

TEST_CASE("workload config round-trips") {
    for (const char* f : {"ll-uniform.cfg", "sl-zipf.cfg", "bst-uniform.cfg", "ht-uniform.cfg"}) {
        const WorkloadSpec w = load_workload(std::string(LFPERF_SOURCE_DIR "/configs/") + f);
        const WorkloadSpec v = workload_from_config(parse_flat_config(workload_to_config(w)));
        CHECK(v.key_range == w.key_range);
        CHECK(v.threads == w.threads);
        CHECK(v.key_distribution.index() == w.key_distribution.index());
        CHECK(std::get<BalancedMix>(v.op_mix).update_fraction == std::get<BalancedMix>(w.op_mix).update_fraction);
    }
}

TEST_CASE("config errors carry line and key") {
    const std::string text = "range = 10\n# comment\nbogus = 3\n";
    try {
        workload_from_config(parse_flat_config(text, "w.cfg"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.key() == "bogus");
        CHECK(std::string(e.what()).find("w.cfg:3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_flat_config("range = 1\nrange = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_flat_config("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(workload_from_config(parse_flat_config("range = ten\n")), ConfigError);
    CHECK_THROWS_AS(load_workload("/nonexistent.cfg"), ConfigError);
}
