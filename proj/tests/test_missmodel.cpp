#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "rdcache/errors.hpp"
#include "rdcache/missmodel.hpp"
#include "rdcache/simulator.hpp"
#include "support/naive.hpp"

using namespace rdcache;
using testsupport::make_trace;

namespace {

const std::vector<uint64_t> kExampleLines{0, 1, 2, 0, 3, 1, 1, 0, 0, 1};

CacheConfig two_level(uint64_t l1_lines, uint64_t l2_lines, uint32_t cores = 1,
                      uint64_t line_size = 64) {
    CacheConfig config;
    config.line_size_bytes = line_size;
    config.core_count = cores;
    config.levels.push_back({l1_lines * line_size, kFullyAssociative, CacheScope::Private, 10, 1.0});
    config.levels.push_back({l2_lines * line_size, kFullyAssociative, CacheScope::Shared, 130, 1.0});
    return config;
}

AppProfile idle_profile() {
    AppProfile idle;
    idle.app_id = "idle";
    return idle;
}

}  // namespace

TEST_CASE("hit and miss counts on the worked example histogram") {
    const AppProfile profile = build_profile(make_trace("ex", kExampleLines));

    const HitMiss at2 = hit_miss_counts(profile.histogram, 2);
    CHECK(at2.hits == 3);
    CHECK(at2.misses == 7);

    const HitMiss at4 = hit_miss_counts(profile.histogram, 4);
    CHECK(at4.hits == 6);
    CHECK(at4.misses == 4);  // compulsory only

    const HitMiss large = hit_miss_counts(profile.histogram, profile.histogram.max_finite_distance() + 1);
    CHECK(large.misses == profile.histogram.cold_count);

    CHECK_THROWS_AS(hit_miss_counts(profile.histogram, 0), ConfigError);
}

TEST_CASE("Mattson equivalence against the flat LRU simulator") {
    std::mt19937_64 rng(31);
    for (int iteration = 0; iteration < 40; ++iteration) {
        const auto lines = testsupport::random_lines(rng(), rng() % 2500, 1 + rng() % 400);
        const AccessTrace trace = make_trace("r", lines);
        const AppProfile profile = build_profile(trace);
        for (uint64_t size = 1; size <= 512; size <<= 1) {
            const HitMiss model = hit_miss_counts(profile.histogram, size);
            const FlatSimResult sim = simulate_flat_lru(trace, size);
            CHECK(model.misses == sim.misses[0]);
            CHECK(model.hits == sim.hits[0]);
            CHECK(model.hits + model.misses == profile.histogram.total);
        }
    }
}

TEST_CASE("miss counts are monotone in size") {
    const AppProfile profile =
        build_profile(make_trace("r", testsupport::random_lines(41, 3000, 600)));
    uint64_t previous = profile.n + 1;
    for (uint64_t size = 1; size <= 2048; size <<= 1) {
        const uint64_t misses = hit_miss_counts(profile.histogram, size).misses;
        CHECK(misses <= previous);
        previous = misses;
    }
    CHECK(previous == profile.histogram.cold_count);
}

TEST_CASE("solo hierarchy misses of the worked example") {
    const AppProfile profile = build_profile(make_trace("ex", kExampleLines));
    const AppProfile idle = idle_profile();
    const AggregatedHistogram aggregated = aggregate_pair(profile, idle);
    const CacheConfig config = two_level(2, 4);

    const MissMatrix misses = hierarchy_miss_counts(profile, idle, aggregated, config);
    CHECK(misses[0][0] == 7);
    CHECK(misses[1][0] == 4);  // distances with 2 <= r < 4 hit the second level
    CHECK(misses[0][1] == 0);
    CHECK(misses[1][1] == 0);

    // exact match with the hierarchy simulator refreshing on every access
    const SimResult sim = simulate_hierarchy({make_trace("ex", kExampleLines)}, config,
                                             LlcUpdatePolicy::EveryAccess);
    CHECK(sim.misses[0][0] == misses[0][0]);
    CHECK(sim.misses[1][0] == misses[1][0]);
}

TEST_CASE("a sufficiently large shared level leaves only compulsory misses") {
    const AppProfile a = build_profile(make_trace("a", testsupport::random_lines(1, 1500, 200)));
    const AppProfile b = build_profile(make_trace("b", testsupport::random_lines(2, 1500, 200)));
    const AggregatedHistogram aggregated = aggregate_pair(a, b);

    const uint64_t llc_lines_needed =
        a.footprint + b.footprint + std::max(aggregated.per_app[0].max_finite_distance(),
                                             aggregated.per_app[1].max_finite_distance());
    uint64_t llc_lines = 1;
    while (llc_lines < llc_lines_needed + 1) llc_lines <<= 1;

    const CacheConfig config = two_level(16, llc_lines, 2);
    const MissMatrix misses = hierarchy_miss_counts(a, b, aggregated, config);
    CHECK(misses[1][0] == a.footprint);
    CHECK(misses[1][1] == b.footprint);
}

TEST_CASE("identical profiles see identical misses") {
    const AppProfile profile =
        build_profile(make_trace("p", testsupport::random_lines(3, 2000, 300)));
    const AggregatedHistogram aggregated = aggregate_pair(profile, profile);
    const MissMatrix misses = hierarchy_miss_counts(profile, profile, aggregated, two_level(64, 256, 2));
    for (const auto& level : misses) CHECK(level[0] == level[1]);
}

TEST_CASE("per-app level hits stay non-negative even with heavy shifts") {
    // base: tight reuse (r=1) separated by enormous spans, so its shifted
    // distance jumps past the second level while the first level still hits
    AppProfile base;
    base.app_id = "spiky";
    base.histogram.add(1, 50);
    base.histogram.add_cold(2);
    base.rd_table[1] = 5000.0;
    base.n = 52;
    base.footprint = 2;

    const AppProfile big =
        build_profile(make_trace("big", testsupport::random_lines(4, 20000, 4096)));
    const AggregatedHistogram aggregated = aggregate_pair(base, big);
    const MissMatrix misses = hierarchy_miss_counts(base, big, aggregated, two_level(4, 1024, 2));
    for (size_t l = 1; l < misses.size(); ++l) {
        CHECK(misses[l][0] <= misses[l - 1][0]);
        CHECK(misses[l][1] <= misses[l - 1][1]);
    }
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(two_level(4, 4).validate(), ConfigError);   // non-increasing
    CHECK_THROWS_AS(two_level(8, 4).validate(), ConfigError);   // shrinking
    CHECK_NOTHROW(two_level(4, 8).validate());

    CacheConfig bad_ways = two_level(4, 8);
    bad_ways.levels[1].ways = 3;  // 8 lines not divisible by 3
    CHECK_THROWS_AS(bad_ways.validate(), ConfigError);

    CacheConfig not_shared = two_level(4, 8, 2);
    not_shared.levels[1].scope = CacheScope::Private;
    CHECK_THROWS_AS(not_shared.validate(), ConfigError);  // two cores need a shared LLC

    CacheConfig shared_then_private = two_level(4, 8, 1);
    shared_then_private.levels[0].scope = CacheScope::Shared;
    shared_then_private.levels[1].scope = CacheScope::Private;
    CHECK_THROWS_AS(shared_then_private.validate(), ConfigError);

    CacheConfig odd_line = two_level(4, 8);
    odd_line.line_size_bytes = 48;
    CHECK_THROWS_AS(odd_line.validate(), ConfigError);
}

TEST_CASE("slowdown objective") {
    const CacheConfig config = two_level(2, 4);
    MissMatrix misses{{4, 3}, {1, 3}};  // level totals 7 and 4
    CHECK(slowdown_objective(misses, config) == 10 * 7 + 130 * 4);

    CacheConfig llc_only = config;
    llc_only.levels[0].miss_penalty_cycles = 0;
    llc_only.levels[1].miss_penalty_cycles = 1;
    CHECK(slowdown_objective(misses, llc_only) == 4);  // last-level miss count

    MissMatrix zero{{0, 0}, {0, 0}};
    CHECK(slowdown_objective(zero, config) == 0);
}

TEST_CASE("cache cost counts private instances per core") {
    CacheConfig config;
    config.core_count = 2;
    config.levels.push_back({16 * 1024, 4, CacheScope::Private, 10, 1.0});
    config.levels.push_back({1024 * 1024, 8, CacheScope::Shared, 130, 1.0});
    CHECK(cache_cost(config) == 2 * 16384 + 1048576);

    for (auto& level : config.levels) level.unit_cost_per_byte = 0.0;
    CHECK(cache_cost(config) == 0.0);

    CacheConfig single;
    single.core_count = 1;
    single.levels.push_back({4096, kFullyAssociative, CacheScope::Private, 0, 0.5});
    CHECK(cache_cost(single) == 0.5 * 4096);
}

TEST_CASE("aggregated private-level switch uses shifted histograms everywhere") {
    const AppProfile a = build_profile(make_trace("a", testsupport::random_lines(5, 2000, 256)));
    const AppProfile b = build_profile(make_trace("b", testsupport::random_lines(6, 2000, 256)));
    const AggregatedHistogram aggregated = aggregate_pair(a, b);
    const CacheConfig config = two_level(32, 512, 2);

    const MissMatrix standalone = hierarchy_miss_counts(a, b, aggregated, config);
    const MissMatrix shifted =
        hierarchy_miss_counts(a, b, aggregated, config, PrivateLevelModel::Aggregated);
    CHECK(standalone[0][0] == hit_miss_counts(a.histogram, 32).misses);
    CHECK(shifted[0][0] == hit_miss_counts(aggregated.per_app[0], 32).misses);
    // shifting never lowers a level's raw miss count
    CHECK(shifted[0][0] >= standalone[0][0]);
}
