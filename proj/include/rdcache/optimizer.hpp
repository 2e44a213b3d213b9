#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rdcache/missmodel.hpp"

namespace rdcache {

// Per-level size bounds (both powers of 2) plus the fixed level parameters.
struct LevelRange {
    uint64_t min_size_bytes = 0;
    uint64_t max_size_bytes = 0;
    uint32_t ways = kFullyAssociative;
    CacheScope scope = CacheScope::Private;
    uint64_t miss_penalty_cycles = 0;
    double unit_cost_per_byte = 0.0;
};

struct DesignSpace {
    uint64_t line_size_bytes = kDefaultLineSizeBytes;
    uint32_t core_count = 1;
    std::vector<LevelRange> levels;

    void validate() const;  // throws ConfigError
};

// Every combination of per-level power-of-2 sizes within bounds that keeps
// sizes strictly increasing across levels, in ascending lexicographic order
// of (s_1, ..., s_n). Bounds that admit nothing yield an empty sequence.
std::vector<CacheConfig> enumerate_space(const DesignSpace& space);

enum class OptimizeMode {
    Budget,    // min f subject to g <= limit
    Slowdown,  // min g subject to f <= limit
};

struct DesignPoint {
    CacheConfig config;
    EvalResult eval;
    bool feasible = false;
};

struct OptimizeOutcome {
    std::vector<DesignPoint> points;   // enumeration order
    std::vector<DesignPoint> ranked;   // feasible points, best first
    std::optional<DesignPoint> winner; // empty when nothing is feasible
};

// Scans the whole space with one aggregation shared across every config (the
// shifted histograms do not depend on cache sizes). Ties break toward the
// lower secondary metric, then the lexicographically smaller size vector.
OptimizeOutcome optimize(const AppProfile& a, const AppProfile& b, const DesignSpace& space,
                         OptimizeMode mode, double limit,
                         PrivateLevelModel private_model = PrivateLevelModel::Standalone);

// Points not dominated in (f, g), deduplicated, sorted by cost ascending.
std::vector<DesignPoint> pareto_front(const std::vector<DesignPoint>& points);

}  // namespace rdcache
