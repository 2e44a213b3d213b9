#include "rdcache/missmodel.hpp"

#include <algorithm>
#include <string>

#include "rdcache/errors.hpp"

namespace rdcache {

void CacheConfig::validate() const {
    if (!is_power_of_two(line_size_bytes)) {
        throw ConfigError("line size must be a power of 2, got " + std::to_string(line_size_bytes));
    }
    if (core_count == 0) throw ConfigError("core count must be positive");
    if (levels.empty()) throw ConfigError("cache config needs at least one level");

    bool seen_shared = false;
    for (size_t l = 0; l < levels.size(); ++l) {
        const CacheLevelSpec& level = levels[l];
        const std::string tag = "L" + std::to_string(l + 1);
        if (!is_power_of_two(level.size_bytes)) {
            throw ConfigError(tag + " size must be a power of 2, got " + std::to_string(level.size_bytes));
        }
        if (level.size_bytes < line_size_bytes) {
            throw ConfigError(tag + " is smaller than one cache line");
        }
        if (level.unit_cost_per_byte < 0.0) throw ConfigError(tag + " unit cost must be non-negative");
        const uint64_t level_lines = level.size_bytes / line_size_bytes;
        if (level.ways != kFullyAssociative && level_lines % level.ways != 0) {
            throw ConfigError(tag + " line count " + std::to_string(level_lines) +
                              " is not divisible by " + std::to_string(level.ways) + " ways");
        }
        if (l > 0 && level.size_bytes <= levels[l - 1].size_bytes) {
            throw ConfigError("inclusive hierarchy requires strictly increasing sizes; " + tag +
                              " does not grow past L" + std::to_string(l));
        }
        if (level.scope == CacheScope::Shared) {
            seen_shared = true;
        } else if (seen_shared) {
            throw ConfigError("a private level cannot sit below a shared level (" + tag + ")");
        }
    }
    if (core_count > 1 && levels.back().scope != CacheScope::Shared) {
        throw ConfigError("multi-core configs must share the last level");
    }
}

HitMiss hit_miss_counts(const ReuseHistogram& histogram, uint64_t size_lines) {
    if (size_lines == 0) throw ConfigError("cache size of 0 lines");
    HitMiss result;
    for (const auto& [distance, count] : histogram.finite) {
        if (distance < size_lines) {
            result.hits += count;
        } else {
            result.misses += count;
        }
    }
    result.misses += histogram.cold_count;
    return result;
}

MissMatrix hierarchy_miss_counts(const AppProfile& a, const AppProfile& b,
                                 const AggregatedHistogram& aggregated, const CacheConfig& config,
                                 PrivateLevelModel private_model) {
    config.validate();
    const std::array<const ReuseHistogram*, 2> standalone{&a.histogram, &b.histogram};
    const std::array<const ReuseHistogram*, 2> shifted{&aggregated.per_app[0],
                                                       &aggregated.per_app[1]};

    MissMatrix misses(config.num_levels());
    for (size_t l = 0; l < config.num_levels(); ++l) {
        const bool use_shifted = config.levels[l].scope == CacheScope::Shared ||
                                 private_model == PrivateLevelModel::Aggregated;
        for (size_t app = 0; app < 2; ++app) {
            const ReuseHistogram& h = use_shifted ? *shifted[app] : *standalone[app];
            uint64_t m = hit_miss_counts(h, config.lines(l)).misses;
            // A level only sees the misses of the level above it.
            if (l > 0) m = std::min(m, misses[l - 1][app]);
            misses[l][app] = m;
        }
    }
    return misses;
}

uint64_t slowdown_objective(const MissMatrix& misses, const CacheConfig& config) {
    uint64_t total = 0;
    for (size_t l = 0; l < misses.size(); ++l) {
        total += config.levels[l].miss_penalty_cycles * (misses[l][0] + misses[l][1]);
    }
    return total;
}

double cache_cost(const CacheConfig& config) {
    double total = 0.0;
    for (const CacheLevelSpec& level : config.levels) {
        const double instances = level.scope == CacheScope::Private ? config.core_count : 1;
        total += level.unit_cost_per_byte * static_cast<double>(level.size_bytes) * instances;
    }
    return total;
}

EvalResult evaluate_pair(const AppProfile& a, const AppProfile& b,
                         const AggregatedHistogram& aggregated, const CacheConfig& config,
                         PrivateLevelModel private_model) {
    EvalResult result;
    result.misses = hierarchy_miss_counts(a, b, aggregated, config, private_model);
    result.objective_f = slowdown_objective(result.misses, config);
    result.cost_g = cache_cost(config);
    return result;
}

}  // namespace rdcache
