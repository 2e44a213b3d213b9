#include "rdcache/optimizer.hpp"

#include <algorithm>
#include <string>

#include "rdcache/aggregate.hpp"
#include "rdcache/errors.hpp"

namespace rdcache {

namespace {

std::vector<uint64_t> sizes_of(const CacheConfig& config) {
    std::vector<uint64_t> sizes;
    sizes.reserve(config.levels.size());
    for (const CacheLevelSpec& level : config.levels) sizes.push_back(level.size_bytes);
    return sizes;
}

// Strict-weak order: primary objective, secondary metric, then sizes.
bool better(const DesignPoint& x, const DesignPoint& y, OptimizeMode mode) {
    if (mode == OptimizeMode::Budget) {
        if (x.eval.objective_f != y.eval.objective_f) return x.eval.objective_f < y.eval.objective_f;
        if (x.eval.cost_g != y.eval.cost_g) return x.eval.cost_g < y.eval.cost_g;
    } else {
        if (x.eval.cost_g != y.eval.cost_g) return x.eval.cost_g < y.eval.cost_g;
        if (x.eval.objective_f != y.eval.objective_f) return x.eval.objective_f < y.eval.objective_f;
    }
    return sizes_of(x.config) < sizes_of(y.config);
}

}  // namespace

void DesignSpace::validate() const {
    if (!is_power_of_two(line_size_bytes)) {
        throw ConfigError("line size must be a power of 2, got " + std::to_string(line_size_bytes));
    }
    if (core_count == 0) throw ConfigError("core count must be positive");
    if (levels.empty()) throw ConfigError("design space needs at least one level");
    for (size_t l = 0; l < levels.size(); ++l) {
        const LevelRange& range = levels[l];
        const std::string tag = "L" + std::to_string(l + 1);
        if (!is_power_of_two(range.min_size_bytes) || !is_power_of_two(range.max_size_bytes)) {
            throw ConfigError(tag + " bounds must be powers of 2");
        }
        if (range.min_size_bytes > range.max_size_bytes) {
            throw ConfigError(tag + " has min size above max size");
        }
        if (range.min_size_bytes < line_size_bytes) {
            throw ConfigError(tag + " minimum is smaller than one cache line");
        }
    }
}

std::vector<CacheConfig> enumerate_space(const DesignSpace& space) {
    space.validate();
    std::vector<CacheConfig> configs;
    CacheConfig current;
    current.line_size_bytes = space.line_size_bytes;
    current.core_count = space.core_count;
    current.levels.resize(space.levels.size());
    for (size_t l = 0; l < space.levels.size(); ++l) {
        current.levels[l].ways = space.levels[l].ways;
        current.levels[l].scope = space.levels[l].scope;
        current.levels[l].miss_penalty_cycles = space.levels[l].miss_penalty_cycles;
        current.levels[l].unit_cost_per_byte = space.levels[l].unit_cost_per_byte;
    }

    auto recurse = [&](auto&& self, size_t level) -> void {
        if (level == space.levels.size()) {
            configs.push_back(current);
            return;
        }
        const LevelRange& range = space.levels[level];
        uint64_t size = range.min_size_bytes;
        // Strict monotonicity against the level below the core side.
        if (level > 0) {
            while (size <= current.levels[level - 1].size_bytes && size < range.max_size_bytes) {
                size <<= 1;
            }
            if (size <= current.levels[level - 1].size_bytes) return;
        }
        for (; size <= range.max_size_bytes; size <<= 1) {
            current.levels[level].size_bytes = size;
            self(self, level + 1);
            if (size > range.max_size_bytes / 2) break;  // avoid shift overflow
        }
    };
    recurse(recurse, 0);
    return configs;
}

OptimizeOutcome optimize(const AppProfile& a, const AppProfile& b, const DesignSpace& space,
                         OptimizeMode mode, double limit, PrivateLevelModel private_model) {
    if (a.n == 0 && b.n == 0) throw UndefinedError("optimize: both profiles are empty");

    // The shift model is architecture-independent; one aggregation serves
    // the entire scan.
    const AggregatedHistogram aggregated = aggregate_pair(a, b);

    OptimizeOutcome outcome;
    for (const CacheConfig& config : enumerate_space(space)) {
        DesignPoint point;
        point.config = config;
        point.eval = evaluate_pair(a, b, aggregated, config, private_model);
        const double constrained = mode == OptimizeMode::Budget
                                       ? point.eval.cost_g
                                       : static_cast<double>(point.eval.objective_f);
        point.feasible = constrained <= limit;
        outcome.points.push_back(std::move(point));
    }

    for (const DesignPoint& point : outcome.points) {
        if (point.feasible) outcome.ranked.push_back(point);
    }
    std::sort(outcome.ranked.begin(), outcome.ranked.end(),
              [mode](const DesignPoint& x, const DesignPoint& y) { return better(x, y, mode); });
    if (!outcome.ranked.empty()) outcome.winner = outcome.ranked.front();
    return outcome;
}

std::vector<DesignPoint> pareto_front(const std::vector<DesignPoint>& points) {
    std::vector<DesignPoint> front;
    for (const DesignPoint& candidate : points) {
        const uint64_t cf = candidate.eval.objective_f;
        const double cg = candidate.eval.cost_g;
        bool dominated = false;
        for (const DesignPoint& other : points) {
            const uint64_t of = other.eval.objective_f;
            const double og = other.eval.cost_g;
            if (of <= cf && og <= cg && (of < cf || og < cg)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        // One representative per (f, g): keep the smaller size vector.
        auto twin = std::find_if(front.begin(), front.end(), [&](const DesignPoint& kept) {
            return kept.eval.objective_f == cf && kept.eval.cost_g == cg;
        });
        if (twin == front.end()) {
            front.push_back(candidate);
        } else if (sizes_of(candidate.config) < sizes_of(twin->config)) {
            *twin = candidate;
        }
    }
    std::sort(front.begin(), front.end(), [](const DesignPoint& x, const DesignPoint& y) {
        if (x.eval.cost_g != y.eval.cost_g) return x.eval.cost_g < y.eval.cost_g;
        return x.eval.objective_f < y.eval.objective_f;
    });
    return front;
}

}  // namespace rdcache
