#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdcache/errors.hpp"
#include "rdcache/serialize.hpp"
#include "support/naive.hpp"

using namespace rdcache;
using nlohmann::json;
using testsupport::make_trace;

TEST_CASE("profile documents round-trip exactly") {
    const AppProfile profile =
        build_profile(make_trace("roundtrip", testsupport::random_lines(3, 4000, 500)));
    const json doc = profile_to_json(profile);
    const AppProfile loaded = profile_from_json(doc);
    CHECK(loaded.app_id == profile.app_id);
    CHECK(loaded.n == profile.n);
    CHECK(loaded.footprint == profile.footprint);
    CHECK(loaded.histogram.finite == profile.histogram.finite);
    CHECK(loaded.histogram.cold_count == profile.histogram.cold_count);
    CHECK(loaded.rd_table == profile.rd_table);  // doubles preserved bit-for-bit

    // a serialize -> parse -> serialize cycle is textually stable
    CHECK(profile_to_json(loaded).dump() == doc.dump());
}

TEST_CASE("loaders unwrap report envelopes") {
    const AppProfile profile = build_profile(make_trace("enveloped", {1, 2, 1, 3}));
    const json envelope{{"schema", kReportSchema},
                        {"command", "analyze"},
                        {"inputs", json::object()},
                        {"result", profile_to_json(profile)}};
    const AppProfile loaded = profile_from_json(envelope);
    CHECK(loaded.histogram.finite == profile.histogram.finite);
}

TEST_CASE("profile invariant violations are rejected") {
    const AppProfile profile = build_profile(make_trace("x", {1, 2, 1, 3}));
    json doc = profile_to_json(profile);

    json wrong_n = doc;
    wrong_n["n"] = profile.n + 1;
    CHECK_THROWS_AS(profile_from_json(wrong_n), ParseError);

    json wrong_footprint = doc;
    wrong_footprint["footprint"] = profile.footprint + 1;
    CHECK_THROWS_AS(profile_from_json(wrong_footprint), ParseError);

    json missing_table_key = doc;
    missing_table_key["rd_table"] = json::array();
    CHECK_THROWS_AS(profile_from_json(missing_table_key), ParseError);

    json wrong_schema = doc;
    wrong_schema["schema"] = "rdcache-config-v1";
    CHECK_THROWS_AS(profile_from_json(wrong_schema), ParseError);
}

TEST_CASE("aggregate documents round-trip") {
    const AppProfile a = build_profile(make_trace("a", testsupport::random_lines(5, 1500, 120)));
    const AppProfile b = build_profile(make_trace("b", testsupport::random_lines(6, 900, 80)));
    const AggregatedHistogram aggregated = aggregate_pair(a, b);
    const AggregatedHistogram loaded = aggregate_from_json(aggregate_to_json(aggregated));
    CHECK(loaded.app_ids == aggregated.app_ids);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(loaded.per_app[i].finite == aggregated.per_app[i].finite);
        CHECK(loaded.per_app[i].cold_count == aggregated.per_app[i].cold_count);
    }
    CHECK(loaded.combined.finite == aggregated.combined.finite);
}

TEST_CASE("config documents") {
    CacheConfig config;
    config.line_size_bytes = 64;
    config.core_count = 2;
    config.levels.push_back({16384, 4, CacheScope::Private, 10, 1.0});
    config.levels.push_back({1 << 20, kFullyAssociative, CacheScope::Shared, 130, 0.25});

    const json doc = cache_config_to_json(config);
    CHECK(doc["levels"][1]["ways"] == "full");
    const CacheConfig loaded = cache_config_from_json(doc);
    CHECK(loaded.levels.size() == 2);
    CHECK(loaded.levels[0].ways == 4);
    CHECK(loaded.levels[1].ways == kFullyAssociative);
    CHECK(loaded.levels[1].scope == CacheScope::Shared);
    CHECK(loaded.levels[1].unit_cost_per_byte == 0.25);

    json bad_scope = doc;
    bad_scope["levels"][0]["scope"] = "sideways";
    CHECK_THROWS_AS(cache_config_from_json(bad_scope), ParseError);

    json zero_ways = doc;
    zero_ways["levels"][0]["ways"] = 0;
    CHECK_THROWS_AS(cache_config_from_json(zero_ways), ParseError);

    json shrinking = doc;
    shrinking["levels"][1]["size_bytes"] = 4096;
    CHECK_THROWS_AS(cache_config_from_json(shrinking), ConfigError);
}

TEST_CASE("design space documents") {
    DesignSpace space;
    space.core_count = 2;
    space.levels.push_back({1 << 14, 1 << 16, 8, CacheScope::Private, 10, 1.0});
    space.levels.push_back({1 << 17, 1 << 21, kFullyAssociative, CacheScope::Shared, 130, 0.25});
    const DesignSpace loaded = design_space_from_json(design_space_to_json(space));
    CHECK(loaded.levels[0].min_size_bytes == 1 << 14);
    CHECK(loaded.levels[1].max_size_bytes == 1 << 21);

    json doc = design_space_to_json(space);
    doc["levels"][0]["min_size_bytes"] = 3000;  // not a power of 2
    CHECK_THROWS_AS(design_space_from_json(doc), ConfigError);
}

TEST_CASE("workload spec documents") {
    WorkloadSpec spec;
    spec.kind = WorkloadKind::ZipfReuse;
    spec.footprint_lines = 4096;
    spec.length = 100000;
    spec.seed = 17;
    spec.zipf_exponent = 1.25;
    const WorkloadSpec loaded = workload_spec_from_json(workload_spec_to_json(spec));
    CHECK(loaded.kind == WorkloadKind::ZipfReuse);
    CHECK(loaded.footprint_lines == 4096);
    CHECK(loaded.zipf_exponent == 1.25);
    CHECK(generate(loaded).accesses == generate(spec).accesses);
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}
