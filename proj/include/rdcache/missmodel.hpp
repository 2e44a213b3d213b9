#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rdcache/aggregate.hpp"
#include "rdcache/rdist.hpp"

namespace rdcache {

// ways == kFullyAssociative means one set spanning the whole level.
inline constexpr uint32_t kFullyAssociative = 0;

enum class CacheScope { Private, Shared };

struct CacheLevelSpec {
    uint64_t size_bytes = 0;
    uint32_t ways = kFullyAssociative;
    CacheScope scope = CacheScope::Private;
    uint64_t miss_penalty_cycles = 0;   // paid per miss at this level
    double unit_cost_per_byte = 0.0;
};

// Ordered levels from the core outward; the last level is the LLC. Inclusive
// hierarchy, so sizes must strictly increase with depth.
struct CacheConfig {
    uint64_t line_size_bytes = kDefaultLineSizeBytes;
    uint32_t core_count = 1;
    std::vector<CacheLevelSpec> levels;

    void validate() const;  // throws ConfigError
    size_t num_levels() const { return levels.size(); }
    uint64_t lines(size_t level) const { return levels[level].size_bytes / line_size_bytes; }
};

struct HitMiss {
    uint64_t hits = 0;
    uint64_t misses = 0;
};

// Mattson rule for a fully-associative LRU cache of size_lines lines:
// distances below the size hit, everything else (including cold) misses.
HitMiss hit_miss_counts(const ReuseHistogram& histogram, uint64_t size_lines);

// Which histogram drives private levels: the stand-alone one (a private
// cache sees no interleaving) or the shifted one (apply the aggregated
// histogram at every level, provided for comparison).
enum class PrivateLevelModel { Standalone, Aggregated };

// misses[level][app]
using MissMatrix = std::vector<std::array<uint64_t, 2>>;

// Per-level per-app miss counts for a concurrent pair: private levels use
// each app's own histogram, shared levels the shifted per-app histograms.
// Level-l misses are capped by level-(l-1) misses so per-level hits stay
// non-negative along the inclusive lookup chain.
MissMatrix hierarchy_miss_counts(const AppProfile& a, const AppProfile& b,
                                 const AggregatedHistogram& aggregated, const CacheConfig& config,
                                 PrivateLevelModel private_model = PrivateLevelModel::Standalone);

// f = sum over levels of miss_penalty * (misses of both apps).
uint64_t slowdown_objective(const MissMatrix& misses, const CacheConfig& config);

// g = sum over levels of unit_cost * size * instance count (one instance per
// core for private levels, one total for shared levels).
double cache_cost(const CacheConfig& config);

struct EvalResult {
    MissMatrix misses;
    uint64_t objective_f = 0;
    double cost_g = 0.0;
};

EvalResult evaluate_pair(const AppProfile& a, const AppProfile& b,
                         const AggregatedHistogram& aggregated, const CacheConfig& config,
                         PrivateLevelModel private_model = PrivateLevelModel::Standalone);

}  // namespace rdcache
