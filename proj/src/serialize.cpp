#include "rdcache/serialize.hpp"

#include <fstream>
#include <sstream>

#include "rdcache/errors.hpp"

namespace rdcache {

using nlohmann::json;

namespace {

void require_schema(const json& doc, const char* schema) {
    if (doc.contains("schema") && doc.at("schema") != schema) {
        throw ParseError("expected schema '" + std::string(schema) + "', found '" +
                         doc.at("schema").get<std::string>() + "'");
    }
}

json histogram_pairs(const ReuseHistogram& histogram) {
    json pairs = json::array();
    for (const auto& [distance, count] : histogram.finite) pairs.push_back({distance, count});
    return pairs;
}

void load_histogram_pairs(const json& pairs, ReuseHistogram& histogram) {
    for (const auto& entry : pairs) {
        histogram.add(entry.at(0).get<uint64_t>(), entry.at(1).get<uint64_t>());
    }
}

json scope_name(CacheScope scope) {
    return scope == CacheScope::Private ? "private" : "shared";
}

CacheScope scope_from_name(const std::string& name) {
    if (name == "private") return CacheScope::Private;
    if (name == "shared") return CacheScope::Shared;
    throw ParseError("unknown cache scope: " + name);
}

json ways_value(uint32_t ways) {
    if (ways == kFullyAssociative) return "full";
    return ways;
}

uint32_t ways_from_value(const json& value) {
    if (value.is_string()) {
        if (value == "full" || value == "FULL") return kFullyAssociative;
        throw ParseError("ways must be a positive integer or \"full\"");
    }
    const auto ways = value.get<uint32_t>();
    if (ways == 0) throw ParseError("ways must be a positive integer or \"full\"");
    return ways;
}

}  // namespace

json profile_to_json(const AppProfile& profile) {
    json table = json::array();
    for (const auto& [distance, span] : profile.rd_table) table.push_back({distance, span});
    return json{{"schema", kProfileSchema},
                {"app_id", profile.app_id},
                {"n", profile.n},
                {"footprint", profile.footprint},
                {"cold_count", profile.histogram.cold_count},
                {"histogram", histogram_pairs(profile.histogram)},
                {"rd_table", table}};
}

AppProfile profile_from_json(const json& doc) {
    const json& body = payload_of(doc);
    require_schema(body, kProfileSchema);
    AppProfile profile;
    try {
        profile.app_id = body.at("app_id").get<std::string>();
        load_histogram_pairs(body.at("histogram"), profile.histogram);
        profile.histogram.add_cold(body.at("cold_count").get<uint64_t>());
        for (const auto& entry : body.at("rd_table")) {
            profile.rd_table[entry.at(0).get<uint64_t>()] = entry.at(1).get<double>();
        }
        profile.n = body.at("n").get<uint64_t>();
        profile.footprint = body.at("footprint").get<uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed profile document: ") + e.what());
    }
    if (profile.n != profile.histogram.total) {
        throw ParseError("profile invariant broken: n does not match histogram total");
    }
    if (profile.footprint != profile.histogram.cold_count) {
        throw ParseError("profile invariant broken: footprint does not match cold count");
    }
    for (const auto& [distance, count] : profile.histogram.finite) {
        (void)count;
        if (!profile.rd_table.contains(distance)) {
            throw ParseError("profile invariant broken: histogram distance missing from rd_table");
        }
    }
    if (profile.rd_table.size() != profile.histogram.finite.size()) {
        throw ParseError("profile invariant broken: rd_table has extra distances");
    }
    return profile;
}

json aggregate_to_json(const AggregatedHistogram& aggregated) {
    json apps = json::array();
    for (size_t i = 0; i < 2; ++i) {
        apps.push_back({{"app_id", aggregated.app_ids[i]},
                        {"total", aggregated.per_app[i].total},
                        {"cold_count", aggregated.per_app[i].cold_count},
                        {"histogram", histogram_pairs(aggregated.per_app[i])}});
    }
    return json{{"schema", kAggregateSchema},
                {"apps", apps},
                {"combined",
                 {{"total", aggregated.combined.total},
                  {"cold_count", aggregated.combined.cold_count},
                  {"histogram", histogram_pairs(aggregated.combined)}}}};
}

AggregatedHistogram aggregate_from_json(const json& doc) {
    const json& body = payload_of(doc);
    require_schema(body, kAggregateSchema);
    AggregatedHistogram aggregated;
    try {
        const json& apps = body.at("apps");
        if (apps.size() != 2) throw ParseError("aggregate document needs exactly two apps");
        for (size_t i = 0; i < 2; ++i) {
            aggregated.app_ids[i] = apps[i].at("app_id").get<std::string>();
            load_histogram_pairs(apps[i].at("histogram"), aggregated.per_app[i]);
            aggregated.per_app[i].add_cold(apps[i].at("cold_count").get<uint64_t>());
            if (aggregated.per_app[i].total != apps[i].at("total").get<uint64_t>()) {
                throw ParseError("aggregate invariant broken: per-app total mismatch");
            }
        }
        load_histogram_pairs(body.at("combined").at("histogram"), aggregated.combined);
        aggregated.combined.add_cold(body.at("combined").at("cold_count").get<uint64_t>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed aggregate document: ") + e.what());
    }
    if (aggregated.combined.total != aggregated.per_app[0].total + aggregated.per_app[1].total) {
        throw ParseError("aggregate invariant broken: combined total mismatch");
    }
    return aggregated;
}

json cache_config_to_json(const CacheConfig& config) {
    json levels = json::array();
    for (const CacheLevelSpec& level : config.levels) {
        levels.push_back({{"size_bytes", level.size_bytes},
                          {"ways", ways_value(level.ways)},
                          {"scope", scope_name(level.scope)},
                          {"miss_penalty_cycles", level.miss_penalty_cycles},
                          {"unit_cost_per_byte", level.unit_cost_per_byte}});
    }
    return json{{"schema", kConfigSchema},
                {"line_size_bytes", config.line_size_bytes},
                {"core_count", config.core_count},
                {"levels", levels}};
}

CacheConfig cache_config_from_json(const json& doc) {
    const json& body = payload_of(doc);
    require_schema(body, kConfigSchema);
    CacheConfig config;
    try {
        config.line_size_bytes = body.at("line_size_bytes").get<uint64_t>();
        config.core_count = body.at("core_count").get<uint32_t>();
        for (const auto& entry : body.at("levels")) {
            CacheLevelSpec level;
            level.size_bytes = entry.at("size_bytes").get<uint64_t>();
            level.ways = ways_from_value(entry.at("ways"));
            level.scope = scope_from_name(entry.at("scope").get<std::string>());
            level.miss_penalty_cycles = entry.at("miss_penalty_cycles").get<uint64_t>();
            level.unit_cost_per_byte = entry.value("unit_cost_per_byte", 0.0);
            config.levels.push_back(level);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed config document: ") + e.what());
    }
    config.validate();
    return config;
}

json design_space_to_json(const DesignSpace& space) {
    json levels = json::array();
    for (const LevelRange& range : space.levels) {
        levels.push_back({{"min_size_bytes", range.min_size_bytes},
                          {"max_size_bytes", range.max_size_bytes},
                          {"ways", ways_value(range.ways)},
                          {"scope", scope_name(range.scope)},
                          {"miss_penalty_cycles", range.miss_penalty_cycles},
                          {"unit_cost_per_byte", range.unit_cost_per_byte}});
    }
    return json{{"schema", kSpaceSchema},
                {"line_size_bytes", space.line_size_bytes},
                {"core_count", space.core_count},
                {"levels", levels}};
}

DesignSpace design_space_from_json(const json& doc) {
    const json& body = payload_of(doc);
    require_schema(body, kSpaceSchema);
    DesignSpace space;
    try {
        space.line_size_bytes = body.at("line_size_bytes").get<uint64_t>();
        space.core_count = body.at("core_count").get<uint32_t>();
        for (const auto& entry : body.at("levels")) {
            LevelRange range;
            range.min_size_bytes = entry.at("min_size_bytes").get<uint64_t>();
            range.max_size_bytes = entry.at("max_size_bytes").get<uint64_t>();
            range.ways = ways_from_value(entry.at("ways"));
            range.scope = scope_from_name(entry.at("scope").get<std::string>());
            range.miss_penalty_cycles = entry.at("miss_penalty_cycles").get<uint64_t>();
            range.unit_cost_per_byte = entry.value("unit_cost_per_byte", 0.0);
            space.levels.push_back(range);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed design space document: ") + e.what());
    }
    space.validate();
    return space;
}

json workload_spec_to_json(const WorkloadSpec& spec) {
    return json{{"schema", kWorkloadSchema},
                {"kind", workload_kind_name(spec.kind)},
                {"footprint_lines", spec.footprint_lines},
                {"length", spec.length},
                {"seed", spec.seed},
                {"stride", spec.stride},
                {"zipf_exponent", spec.zipf_exponent},
                {"app_id", spec.app_id}};
}

WorkloadSpec workload_spec_from_json(const json& doc) {
    const json& body = payload_of(doc);
    require_schema(body, kWorkloadSchema);
    WorkloadSpec spec;
    try {
        spec.kind = workload_kind_from_name(body.at("kind").get<std::string>());
        spec.footprint_lines = body.at("footprint_lines").get<uint64_t>();
        spec.length = body.at("length").get<uint64_t>();
        spec.seed = body.value("seed", uint64_t{1});
        spec.stride = body.value("stride", uint64_t{1});
        spec.zipf_exponent = body.value("zipf_exponent", 1.0);
        spec.app_id = body.value("app_id", std::string{});
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed workload document: ") + e.what());
    }
    return spec;
}

namespace {

json level_rows(const MissMatrix& misses, const CacheConfig& config,
                const std::array<uint64_t, 2>& level_zero_accesses) {
    json rows = json::array();
    for (size_t l = 0; l < misses.size(); ++l) {
        const std::array<uint64_t, 2> accesses =
            l == 0 ? level_zero_accesses : std::array<uint64_t, 2>{misses[l - 1][0], misses[l - 1][1]};
        rows.push_back({{"level", l + 1},
                        {"size_bytes", config.levels[l].size_bytes},
                        {"scope", scope_name(config.levels[l].scope)},
                        {"hits", {accesses[0] - misses[l][0], accesses[1] - misses[l][1]}},
                        {"misses", {misses[l][0], misses[l][1]}}});
    }
    return rows;
}

}  // namespace

json eval_to_json(const EvalResult& eval, const CacheConfig& config,
                  const std::array<std::string, 2>& app_ids,
                  const std::array<uint64_t, 2>& access_counts) {
    return json{{"apps", app_ids},
                {"objective_f", eval.objective_f},
                {"cost_g", eval.cost_g},
                {"levels", level_rows(eval.misses, config, access_counts)}};
}

json sim_to_json(const SimResult& sim, const CacheConfig& config,
                 const std::array<std::string, 2>& app_ids) {
    json rows = json::array();
    for (size_t l = 0; l < sim.misses.size(); ++l) {
        rows.push_back({{"level", l + 1},
                        {"size_bytes", config.levels[l].size_bytes},
                        {"scope", scope_name(config.levels[l].scope)},
                        {"hits", {sim.hits[l][0], sim.hits[l][1]}},
                        {"misses", {sim.misses[l][0], sim.misses[l][1]}}});
    }
    return json{{"apps", app_ids}, {"levels", rows}};
}

json design_point_to_json(const DesignPoint& point) {
    json sizes = json::array();
    for (const CacheLevelSpec& level : point.config.levels) sizes.push_back(level.size_bytes);
    json misses = json::array();
    for (const auto& level : point.eval.misses) misses.push_back({level[0], level[1]});
    return json{{"sizes_bytes", sizes},
                {"objective_f", point.eval.objective_f},
                {"cost_g", point.eval.cost_g},
                {"misses", misses},
                {"feasible", point.feasible}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

const json& payload_of(const json& doc) {
    if (doc.is_object() && doc.contains("result") && doc.contains("schema") &&
        doc.at("schema") == kReportSchema) {
        return doc.at("result");
    }
    return doc;
}

std::string fnv1a64_hex(const std::string& bytes) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream hex;
    hex << std::hex << hash;
    return hex.str();
}

std::string fnv1a64_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a64_hex(buffer.str());
}

}  // namespace rdcache
