#include "rdcache/simulator.hpp"

#include <list>
#include <unordered_map>

#include "rdcache/errors.hpp"

namespace rdcache {

namespace {

struct LineKey {
    uint32_t owner = 0;
    uint64_t line = 0;
    bool operator==(const LineKey&) const = default;
};

struct LineKeyHash {
    size_t operator()(const LineKey& key) const {
        uint64_t h = key.line + 0x9e3779b97f4a7c15ULL * (key.owner + 1);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<size_t>(h);
    }
};

// One associativity set with exact LRU order (front = most recent).
class LruSet {
public:
    explicit LruSet(uint64_t capacity) : capacity_(capacity) {}

    bool touch(const LineKey& key) {
        auto it = index_.find(key);
        if (it == index_.end()) return false;
        order_.splice(order_.begin(), order_, it->second);
        return true;
    }

    bool contains(const LineKey& key) const { return index_.contains(key); }

    // Inserts at MRU; returns the evicted victim if the set was full.
    std::pair<bool, LineKey> insert(const LineKey& key) {
        order_.push_front(key);
        index_[key] = order_.begin();
        if (order_.size() <= capacity_) return {false, {}};
        const LineKey victim = order_.back();
        index_.erase(victim);
        order_.pop_back();
        return {true, victim};
    }

    void erase(const LineKey& key) {
        auto it = index_.find(key);
        if (it == index_.end()) return;
        order_.erase(it->second);
        index_.erase(it);
    }

    const std::list<LineKey>& lines() const { return order_; }

private:
    uint64_t capacity_;
    std::list<LineKey> order_;
    std::unordered_map<LineKey, std::list<LineKey>::iterator, LineKeyHash> index_;
};

class SetAssocCache {
public:
    SetAssocCache(uint64_t size_lines, uint32_t ways) {
        if (size_lines == 0) throw ConfigError("cache size of 0 lines");
        uint64_t set_count = 1;
        uint64_t set_ways = size_lines;
        if (ways != kFullyAssociative) {
            if (size_lines % ways != 0) {
                throw ConfigError("line count " + std::to_string(size_lines) +
                                  " is not divisible by " + std::to_string(ways) + " ways");
            }
            set_count = size_lines / ways;
            set_ways = ways;
        }
        sets_.reserve(set_count);
        for (uint64_t i = 0; i < set_count; ++i) sets_.emplace_back(set_ways);
    }

    LruSet& set_for(uint64_t line) { return sets_[line % sets_.size()]; }
    const std::vector<LruSet>& sets() const { return sets_; }

private:
    std::vector<LruSet> sets_;
};

}  // namespace

InterleavePolicy InterleavePolicy::bursts(uint64_t k, uint64_t m) {
    if (k == 0 || m == 0) throw ConfigError("interleave bursts must be positive");
    return InterleavePolicy{k, m};
}

MergedTrace interleave_traces(const AccessTrace& a, const AccessTrace& b,
                              const InterleavePolicy& policy) {
    MergedTrace merged;
    merged.app_ids = {a.app_id, b.app_id};
    const uint64_t n_a = a.accesses.size();
    const uint64_t n_b = b.accesses.size();
    merged.accesses.reserve(n_a + n_b);

    uint64_t e_a = 0, e_b = 0;  // emitted so far
    auto emit_a = [&] { merged.accesses.push_back({0, a.accesses[e_a++]}); };
    auto emit_b = [&] { merged.accesses.push_back({1, b.accesses[e_b++]}); };

    if (policy.is_proportional()) {
        while (e_a < n_a || e_b < n_b) {
            if (e_a == n_a) {
                emit_b();
            } else if (e_b == n_b) {
                emit_a();
            } else {
                // Next emission is the app whose (e+1)-th access has the
                // earlier position on the shared timeline: (e+1)/n, compared
                // exactly by cross-multiplication. a wins ties.
                const auto lhs = static_cast<unsigned __int128>(e_a + 1) * n_b;
                const auto rhs = static_cast<unsigned __int128>(e_b + 1) * n_a;
                if (lhs <= rhs) {
                    emit_a();
                } else {
                    emit_b();
                }
            }
        }
    } else {
        while (e_a < n_a || e_b < n_b) {
            for (uint64_t i = 0; i < policy.burst_a && e_a < n_a; ++i) emit_a();
            for (uint64_t i = 0; i < policy.burst_b && e_b < n_b; ++i) emit_b();
        }
    }
    return merged;
}

FlatSimResult simulate_flat_lru(const MergedTrace& trace, uint64_t size_lines, uint32_t ways) {
    SetAssocCache cache(size_lines, ways);
    FlatSimResult result;
    for (const MergedAccess& access : trace.accesses) {
        const LineKey key{access.owner, access.line};
        LruSet& set = cache.set_for(access.line);
        if (set.touch(key)) {
            ++result.hits[access.owner];
        } else {
            ++result.misses[access.owner];
            set.insert(key);  // victim dropped, demand-fetch read-only model
        }
    }
    return result;
}

FlatSimResult simulate_flat_lru(const AccessTrace& trace, uint64_t size_lines, uint32_t ways) {
    MergedTrace merged;
    merged.app_ids = {trace.app_id, ""};
    merged.accesses.reserve(trace.accesses.size());
    for (uint64_t line : trace.accesses) merged.accesses.push_back({0, line});
    return simulate_flat_lru(merged, size_lines, ways);
}

struct HierarchySimulator::Impl {
    CacheConfig config;
    LlcUpdatePolicy policy;
    // instances[level]: one cache per core for private levels, a single
    // shared one otherwise.
    std::vector<std::vector<SetAssocCache>> instances;
    SimResult counts;

    Impl(const CacheConfig& cfg, LlcUpdatePolicy pol) : config(cfg), policy(pol) {
        config.validate();
        const size_t depth = config.num_levels();
        counts.hits.assign(depth, {0, 0});
        counts.misses.assign(depth, {0, 0});
        instances.resize(depth);
        for (size_t l = 0; l < depth; ++l) {
            const uint32_t copies =
                config.levels[l].scope == CacheScope::Private ? config.core_count : 1;
            for (uint32_t c = 0; c < copies; ++c) {
                instances[l].emplace_back(config.lines(l), config.levels[l].ways);
            }
        }
    }

    SetAssocCache& instance(size_t level, uint32_t core) {
        return config.levels[level].scope == CacheScope::Private ? instances[level][core]
                                                                 : instances[level][0];
    }

    void back_invalidate(size_t from_level, const LineKey& victim) {
        for (size_t l = 0; l < from_level; ++l) {
            instance(l, victim.owner).set_for(victim.line).erase(victim);
        }
    }

    void access(uint32_t core, uint64_t line) {
        const LineKey key{core, line};
        const size_t depth = config.num_levels();

        size_t hit_level = depth;  // depth means fetched from memory
        for (size_t l = 0; l < depth; ++l) {
            if (instance(l, core).set_for(line).touch(key)) {
                hit_level = l;
                ++counts.hits[l][core];
                break;
            }
            ++counts.misses[l][core];
        }

        if (policy == LlcUpdatePolicy::EveryAccess) {
            // Inclusion guarantees outer levels hold the line; refresh their
            // recency even though no lookup reached them.
            for (size_t l = hit_level + 1; l < depth; ++l) {
                instance(l, core).set_for(line).touch(key);
            }
        }

        // Fill the missed levels outer-first so inclusion holds throughout.
        for (size_t l = hit_level; l-- > 0;) {
            auto [evicted, victim] = instance(l, core).set_for(line).insert(key);
            // Evicting from an outer level pulls the line out of every level
            // above it. An innermost-level victim is dropped silently: its
            // outer replicas keep whatever recency they last earned.
            if (evicted && l > 0) back_invalidate(l, victim);
        }
    }

    bool inclusion_holds() const {
        for (size_t l = 0; l + 1 < config.num_levels(); ++l) {
            for (const SetAssocCache& cache : instances[l]) {
                for (const LruSet& set : cache.sets()) {
                    for (const LineKey& key : set.lines()) {
                        for (size_t outer = l + 1; outer < config.num_levels(); ++outer) {
                            const SetAssocCache& outer_cache =
                                config.levels[outer].scope == CacheScope::Private
                                    ? instances[outer][key.owner]
                                    : instances[outer][0];
                            const auto& outer_sets = outer_cache.sets();
                            if (!outer_sets[key.line % outer_sets.size()].contains(key)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        return true;
    }
};

HierarchySimulator::HierarchySimulator(const CacheConfig& config, LlcUpdatePolicy policy)
    : impl_(std::make_unique<Impl>(config, policy)) {}
HierarchySimulator::~HierarchySimulator() = default;
HierarchySimulator::HierarchySimulator(HierarchySimulator&&) noexcept = default;
HierarchySimulator& HierarchySimulator::operator=(HierarchySimulator&&) noexcept = default;

void HierarchySimulator::access(uint32_t core, uint64_t line) { impl_->access(core, line); }
bool HierarchySimulator::inclusion_holds() const { return impl_->inclusion_holds(); }
const SimResult& HierarchySimulator::result() const { return impl_->counts; }

SimResult simulate_hierarchy(const std::vector<AccessTrace>& per_core_traces,
                             const CacheConfig& config, LlcUpdatePolicy policy,
                             const InterleavePolicy& interleave) {
    config.validate();
    if (per_core_traces.empty() || per_core_traces.size() > 2) {
        throw ConfigError("hierarchy simulation takes one or two per-core traces");
    }
    if (per_core_traces.size() != config.core_count) {
        throw ConfigError("trace count " + std::to_string(per_core_traces.size()) +
                          " does not match core count " + std::to_string(config.core_count));
    }
    for (const AccessTrace& trace : per_core_traces) {
        if (trace.line_size_bytes != config.line_size_bytes) {
            throw ConfigError("trace line size " + std::to_string(trace.line_size_bytes) +
                              " does not match config line size " +
                              std::to_string(config.line_size_bytes));
        }
    }

    HierarchySimulator sim(config, policy);
    if (per_core_traces.size() == 1) {
        for (uint64_t line : per_core_traces[0].accesses) sim.access(0, line);
    } else {
        const MergedTrace merged =
            interleave_traces(per_core_traces[0], per_core_traces[1], interleave);
        for (const MergedAccess& access : merged.accesses) sim.access(access.owner, access.line);
    }
    return sim.result();
}

double error_rate(uint64_t simulated_misses, uint64_t modeled_misses) {
    if (simulated_misses == 0) {
        if (modeled_misses == 0) return 0.0;
        throw UndefinedError("error rate undefined: simulator observed no misses");
    }
    return (static_cast<double>(simulated_misses) - static_cast<double>(modeled_misses)) /
           static_cast<double>(simulated_misses);
}

}  // namespace rdcache
